'''
Exact tropical linear algebra: min-plus semifield over Python Fractions.
Matroids by explicit basis families or rank oracles; Bergman fans by flags of flats.
Realisable oracle: linear algebra over GF(2), GF(3), GF(4), GF(5) with trivial valuation.
External input: the rank bound for quasi-products of U(2,3) and V8 (Las Vergnas 1981).
---------------------------------
'''

import os
import logging
import datetime
from scipy.special import comb

logger = logging.getLogger(__name__)


class Config(object):
    r"""Master config"""
    def __init__(self, seed_num=0, current_date=None, threads=1):

        self.notes = 'tropmat: truncated tropical ideals and Bergman fans'

        self.seed_num = seed_num
        self.threads = threads
        if current_date is None:
            self.cur_datetime = datetime.datetime.now().strftime('%Y-%m-%d-%H-%M-%S')
        else:
            self.cur_datetime = current_date

        # Truncation. D is first-class; the cap keeps |Mon_{<=D}| small enough for exact spans.
        self.truncation_degree = 3
        self.max_monomials = 300
        env_cap = os.environ.get('TROPMAT_MAX_D')
        if env_cap is not None:
            try:
                self.max_truncation_degree = int(env_cap)
            except ValueError:
                raise ValueError("TROPMAT_MAX_D should be an integer, got [{}].".format(env_cap))
        else:
            self.max_truncation_degree = 6
        if self.max_truncation_degree < 1:
            raise ValueError("The truncation cap [{}] should be at least 1.".format(self.max_truncation_degree))
        if self.truncation_degree > self.max_truncation_degree:
            self.truncation_degree = self.max_truncation_degree

        if self.threads < 1:
            raise ValueError("The number of threads [{}] should be positive.".format(self.threads))

        self.load_matroid_config()
        self.load_span_config()
        self.load_oracle_config()
        self.load_sampling_config()
        self.load_verifier_config()

    def load_matroid_config(self):
        self.max_ground_set = 24
        self.max_isomorphism_size = 12
        self.max_basis_enumeration = 200000
        self.fan_oracle_max_n = 7
        self.intersection_max_n = 10

    def load_span_config(self):
        self.circuit_completion_max_n = 20
        self.circuit_completion_max_rounds = 64
        self.elimination_include_sums = True
        self.elimination_max_family = 12

    def load_oracle_config(self):
        self.field_orders = (2, 3, 4, 5)
        self.gf4_modulus = 'x^2 + x + 1'
        self.enumeration_cap = 2 ** 16

    def load_sampling_config(self):
        self.generic_weight_base = 7
        self.interior_samples = 3
        self.fan_samples_box = 2
        self.fan_samples_random = 200
        self.star_samples = 8

    def load_verifier_config(self):
        self.lv_bound = 7
        self.lv_citation = 'Las Vergnas, On products of matroids, Discrete Math. 36 (1981): quasi-products of U(2,3) and V8 have rank at most 7'

    def max_degree_for(self, n_vars):
        """Largest admissible truncation degree for n_vars variables."""
        d = 0
        while d < self.max_truncation_degree and comb(n_vars + d + 1, d + 1, exact=True) <= self.max_monomials:
            d += 1
        return d

    def check_truncation(self, n_vars, D):
        if D < 0:
            raise ValueError("Truncation degree should be non-negative, got [{}].".format(D))
        if D > self.max_truncation_degree:
            raise ValueError("Truncation degree [{}] exceeds the cap [{}] (TROPMAT_MAX_D).".format(D, self.max_truncation_degree))
        size = comb(n_vars + D, D, exact=True)
        if size > self.max_monomials:
            raise ValueError("|Mon_<=D| = {} for n = {}, D = {} exceeds the cap [{}].".format(size, n_vars, D, self.max_monomials))

    def print_config(self):
        log_str = '=' * 30 + '\n'
        para_str = '{} \n'.format(self.notes)
        log_str = log_str + para_str
        para_str = 'seed_num: {}, threads: {}, cur_datetime: {}, \n'.format(self.seed_num, self.threads, self.cur_datetime)
        log_str = log_str + para_str
        para_str = 'truncation_degree: {}, max_truncation_degree: {}, max_monomials: {}, \n'.format(self.truncation_degree, self.max_truncation_degree, self.max_monomials)
        log_str = log_str + para_str
        para_str = 'max_ground_set: {}, max_isomorphism_size: {}, max_basis_enumeration: {}, fan_oracle_max_n: {}, \n'.format(self.max_ground_set, self.max_isomorphism_size, self.max_basis_enumeration, self.fan_oracle_max_n)
        log_str = log_str + para_str
        para_str = 'circuit_completion_max_rounds: {}, elimination_include_sums: {}, elimination_max_family: {}, \n'.format(self.circuit_completion_max_rounds, self.elimination_include_sums, self.elimination_max_family)
        log_str = log_str + para_str
        para_str = 'field_orders: {}, gf4_modulus: {}, enumeration_cap: {}, \n'.format(self.field_orders, self.gf4_modulus, self.enumeration_cap)
        log_str = log_str + para_str
        para_str = 'generic_weight_base: {}, interior_samples: {}, fan_samples_box: {}, fan_samples_random: {}, star_samples: {}, \n'.format(self.generic_weight_base, self.interior_samples, self.fan_samples_box, self.fan_samples_random, self.star_samples)
        log_str = log_str + para_str
        para_str = 'lv_bound: {} \n'.format(self.lv_bound)
        log_str = log_str + para_str
        log_str = log_str + '=' * 30 + '\n'

        logger.info(log_str)


_default_config = None


def default_config():
    global _default_config
    if _default_config is None:
        _default_config = Config(current_date='static')
    return _default_config
