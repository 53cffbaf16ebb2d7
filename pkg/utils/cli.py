"""
Command line front end.

Exit codes: 0 success or a true answer, 1 a false or negative answer,
2 an input error, 3 a verification failure.
"""

import functools
import logging
import sys

import click
import numpy as np

from ideal.tropideal import (check_ideal_axioms, degree_of_zero_dimensional, generic_weight, independence_complex,
                             initial_ideal, is_saturated, monomial_witness, saturate)
from matroids.bergman import (bergman_predicate, check_star_property, fan_independence_complex, fans_equal_sampled,
                              maximal_cone_weight, membership, star)
from matroids.matroid import Matroid
from oracle.realisable import kronecker_quasiproduct
from semiring.trop_core import members
from semiring.troppoly import degree_offset, monomial_index, monomials_upto
from utils.config import Config
from utils.exceptions import (CertificateError, CircuitSetError, CompletionError, DimensionError, FanError, FieldError,
                              HilbertMismatchError, MatroidError, PreconditionError, SpecializationError,
                              TruncationError)
from utils.io import (load_field_matrix, load_forms, load_ideal, load_matroid, load_polynomial, load_tls,
                      parse_exponents, parse_weights)
from utils.report import Report, frame_rows, hilbert_frame, monomial_frame
from verifier.vamos_verifier import certify_candidate, run_theorem_pipeline

logger = logging.getLogger(__name__)

INPUT_ERRORS = (DimensionError, MatroidError, CircuitSetError, FieldError, TruncationError, PreconditionError,
                ValueError, TypeError, KeyError, OSError)
VERIFICATION_ERRORS = (HilbertMismatchError, SpecializationError, FanError, CompletionError, CertificateError)


def leaf(fn):
    """Shared --json flag, context object and exit-code mapping for every command."""
    @click.option('--json', 'as_json', is_flag=True, help='Emit the machine-readable report.')
    @click.pass_obj
    @functools.wraps(fn)
    def wrapper(obj, as_json, *args, **kwargs):
        obj = dict(obj, json=obj['json'] or as_json)
        try:
            return fn(obj, *args, **kwargs)
        except VERIFICATION_ERRORS as err:
            click.echo('verification failure: {}: {}'.format(type(err).__name__, err), err=True)
            sys.exit(3)
        except INPUT_ERRORS as err:
            click.echo('input error: {}: {}'.format(type(err).__name__, err), err=True)
            sys.exit(2)
    return wrapper


def emit(obj, report: Report, code: int = 0):
    click.echo(report.to_json() if obj['json'] else report.to_human())
    sys.exit(code)


def _report(obj, command: str, inputs=None, **kwargs) -> Report:
    return Report(command=command, seed=obj['config'].seed_num, inputs=inputs or {}, **kwargs)


@click.group(context_settings={'help_option_names': ['-h', '--help']})
@click.option('--json', 'as_json', is_flag=True, help='Emit machine-readable JSON reports.')
@click.option('--seed', default=0, type=int, show_default=True, help='Seed for every sampled check.')
@click.option('--threads', default=1, type=int, show_default=True, help='Bound on per-degree parallelism.')
@click.option('--verbose', is_flag=True, help='Log progress to stderr.')
@click.pass_context
def cli(ctx, as_json, seed, threads, verbose):
    """Truncated tropical ideals, Bergman fans and the U(2,3) ⊕ V8 verification."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s', force=True)
    try:
        config = Config(seed_num=seed, current_date='static', threads=threads)
    except ValueError as err:
        raise click.BadParameter(str(err))
    if verbose:
        config.print_config()
    ctx.obj = {'config': config, 'json': as_json}


# matroid

@cli.group('matroid')
def matroid_group():
    """Matroids given as matroid/v1 files or registered names."""


@matroid_group.command('check')
@click.argument('source')
@leaf
def matroid_check(obj, source):
    M, digest = load_matroid(source)
    explicit = M if type(M) is Matroid else M.to_explicit()
    explicit.validate()
    result = dict(M.summary(), bases=len(explicit.basis_masks()), valid=True)
    emit(obj, _report(obj, 'matroid check', {'source': digest}, result=result))


@matroid_group.command('info')
@click.argument('source')
@leaf
def matroid_info(obj, source):
    M, digest = load_matroid(source)
    flats = M.flats_by_rank()
    result = dict(M.summary(), name=M.name, bases=len(M.basis_masks()), loopless=M.is_loopless(),
                  flats_per_rank={str(r): len(F) for r, F in sorted(flats.items())})
    emit(obj, _report(obj, 'matroid info', {'source': digest}, result=result))


@matroid_group.command('flats')
@click.argument('source')
@leaf
def matroid_flats(obj, source):
    M, digest = load_matroid(source)
    rows = [{'rank': r, 'flat': members(F)} for r, Fs in sorted(M.flats_by_rank().items()) for F in Fs]
    emit(obj, _report(obj, 'matroid flats', {'source': digest}, result={'flats': rows}))


@matroid_group.command('circuits')
@click.argument('source')
@leaf
def matroid_circuits(obj, source):
    M, digest = load_matroid(source)
    circuits = sorted((members(c) for c in M.circuit_masks()), key=lambda c: (len(c), c))
    emit(obj, _report(obj, 'matroid circuits', {'source': digest}, result={'circuits': circuits}))


# tls

@cli.group('tls')
def tls_group():
    """Tropical linear spaces given as tls/v1 circuit files."""


@tls_group.command('check')
@click.argument('path')
@leaf
def tls_check(obj, path):
    L, digest = load_tls(path)
    rep = L.check_elimination(obj['config'])
    result = {'n': L.ground_size, 'circuits': len(L), 'rank': L.rank, 'dim': L.dim, 'boolean': L.is_boolean,
              'elimination': rep.passed, 'summary': rep.summary()}
    emit(obj, _report(obj, 'tls check', {'tls': digest}, result=result), 0 if rep.passed else 1)


# bergman

@cli.group('bergman')
def bergman_group():
    """Bergman fans of loopless matroids."""


@bergman_group.command('member')
@click.option('--matroid', 'source', required=True)
@click.option('--w', 'weights', required=True, help='Comma-separated rationals, e.g. 0,0,5.')
@leaf
def bergman_member(obj, source, weights):
    M, digest = load_matroid(source)
    res = membership(M, parse_weights(weights, M.n))
    result = {'member': res.member, 'flag': res.flag.to_json() if res.flag is not None else None}
    emit(obj, _report(obj, 'bergman member', {'matroid': digest}, result=result), 0 if res else 1)


@bergman_group.command('star')
@click.option('--matroid', 'source', required=True)
@click.option('--w', 'weights', required=True)
@leaf
def bergman_star(obj, source, weights):
    config = obj['config']
    M, digest = load_matroid(source)
    w = parse_weights(weights, M.n)
    S = star(M, w)
    rng = np.random.default_rng(config.seed_num)
    us = [[int(x) for x in rng.integers(-2, 3, size=M.n)] for _ in range(config.star_samples)]
    bad = check_star_property(M, w, us)
    result = {
        'rank': S.rank(),
        'circuits': sorted((members(c) for c in S.circuit_masks()), key=lambda c: (len(c), c)),
        'directions': len(us),
        'disagreements': [{'u': [str(x) for x in u], 'star': a, 'moved': b} for u, a, b in bad],
    }
    emit(obj, _report(obj, 'bergman star', {'matroid': digest}, result=result), 0 if not bad else 1)


@bergman_group.command('indep')
@click.option('--matroid', 'source', required=True)
@click.option('--oracle/--no-oracle', default=None, help='Cross-check with the projection oracle.')
@leaf
def bergman_indep(obj, source, oracle):
    M, digest = load_matroid(source)
    rep = fan_independence_complex(M, obj['config'], oracle)
    result = {'dimension': rep.dimension, 'faces': len(rep.faces), 'facets': [sorted(F) for F in rep.facets],
              'oracle_agrees': rep.agree}
    emit(obj, _report(obj, 'bergman indep', {'matroid': digest}, result=result), 0 if rep.agree is not False else 1)


@bergman_group.command('compare')
@click.option('--matroid', 'source', required=True)
@click.option('--other', 'other_source', required=True)
@leaf
def bergman_compare(obj, source, other_source):
    M, d1 = load_matroid(source)
    N, d2 = load_matroid(other_source)
    if M.n != N.n:
        raise DimensionError("Fans in dimensions {} and {}.".format(M.n, N.n))
    cmp = fans_equal_sampled(bergman_predicate(M), bergman_predicate(N), M.n, config=obj['config'], reference=M,
                             weights=(maximal_cone_weight(M), maximal_cone_weight(N)))
    result = {'equal': cmp.passed, 'samples': cmp.samples,
              'disagreements': [{'w': p, 'first': a, 'second': b} for p, a, b in cmp.disagreements[:20]],
              'weight_mismatches': cmp.weight_mismatches[:20]}
    emit(obj, _report(obj, 'bergman compare', {'matroid': d1, 'other': d2}, result=result), 0 if cmp.passed else 1)


# poly

@cli.group('poly')
def poly_group():
    """Tropical polynomials given as poly/v1 files."""


@poly_group.command('eval')
@click.argument('path')
@click.option('--w', 'weights', required=True)
@leaf
def poly_eval(obj, path, weights):
    f, digest = load_polynomial(path)
    value = f.evaluate(parse_weights(weights, f.n))
    emit(obj, _report(obj, 'poly eval', {'poly': digest}, result={'value': value.to_str()}))


@poly_group.command('initial')
@click.argument('path')
@click.option('--w', 'weights', required=True)
@leaf
def poly_initial(obj, path, weights):
    f, digest = load_polynomial(path)
    w = parse_weights(weights, f.n)
    result = {'initial': f.initial_form(w).to_json(), 'minimizers': [list(u) for u in f.minimizers(w)]}
    emit(obj, _report(obj, 'poly initial', {'poly': digest}, result=result))


@poly_group.command('index')
@click.argument('n', type=int)
@click.argument('D', type=int)
@click.option('--exp', 'exponents', default=None, help='Report only this exponent vector, e.g. 1,0,2.')
@leaf
def poly_index(obj, n, d, exponents):
    if n < 1:
        raise DimensionError("Need at least one variable, got [{}].".format(n))
    obj['config'].check_truncation(n, d)
    if exponents is None:
        rows = frame_rows(monomial_frame(monomials_upto(n, d)))
        return emit(obj, _report(obj, 'poly index', result={'n': n, 'D': d, 'monomials': rows}))
    u = parse_exponents(exponents)
    if len(u) != n:
        raise DimensionError("Exponent vector of length {} for {} variables.".format(len(u), n))
    result = {'exp': list(u), 'index': monomial_index(u, d), 'degree': sum(u), 'degree_offset': degree_offset(n, sum(u))}
    emit(obj, _report(obj, 'poly index', result=result))


# ideal

@cli.group('ideal')
def ideal_group():
    """Truncated tropical ideals given as tideal/v1 files."""


def _load_truncated(obj, path, upto):
    I, digest = load_ideal(path, obj['config'])
    return (I if upto is None else I.truncate(upto)), digest


def degree_option(fn):
    return click.option('--D', 'upto', type=int, default=None,
                        help='Work with the ideal truncated at this degree; at most its own.')(fn)


@ideal_group.command('check')
@click.argument('path')
@leaf
def ideal_check(obj, path):
    I, digest = load_ideal(path, obj['config'])
    rep = check_ideal_axioms(I, obj['config'])
    result = {'passed': rep.passed, 'summary': rep.summary(),
              'violations': [{'kind': v.kind, 'degree': v.degree, 'circuit': v.circuit, 'detail': v.detail} for v in rep.violations]}
    emit(obj, _report(obj, 'ideal check', {'ideal': digest}, result=result), 0 if rep.passed else 1)


@ideal_group.command('hilbert')
@click.argument('path')
@degree_option
@leaf
def ideal_hilbert(obj, path, upto):
    I, digest = _load_truncated(obj, path, upto)
    result = {'hilbert': frame_rows(hilbert_frame(I.hilbert_table())),
              'degree': degree_of_zero_dimensional(I) if I.D >= 1 else None}
    emit(obj, _report(obj, 'ideal hilbert', {'ideal': digest}, result=result))


@ideal_group.command('initial')
@click.argument('path')
@click.option('--w', 'weights', default=None, help='Weight vector; a seeded generic weight when omitted.')
@degree_option
@leaf
def ideal_initial(obj, path, weights, upto):
    I, digest = _load_truncated(obj, path, upto)
    w = generic_weight(I.n, obj['config'], I.D) if weights is None else parse_weights(weights, I.n)
    J = initial_ideal(I, w, obj['config'])
    result = {'w': w, 'ideal': J.to_json(), 'hilbert': J.hilbert_table()}
    emit(obj, _report(obj, 'ideal initial', {'ideal': digest}, result=result))


@ideal_group.command('saturate')
@click.argument('path')
@degree_option
@leaf
def ideal_saturate(obj, path, upto):
    I, digest = _load_truncated(obj, path, upto)
    S = saturate(I, obj['config'])
    result = {'was_saturated': is_saturated(I), 'hilbert_before': I.hilbert_table(),
              'hilbert_after': S.hilbert_table(), 'ideal': S.to_json()}
    emit(obj, _report(obj, 'ideal saturate', {'ideal': digest}, result=result))


@ideal_group.command('variety')
@click.argument('path')
@click.option('--w', 'weights', required=True)
@leaf
def ideal_variety(obj, path, weights):
    I, digest = load_ideal(path, obj['config'])
    witness = monomial_witness(I, parse_weights(weights, I.n), obj['config'])
    result = {'member': witness is None,
              'monomial': None if witness is None else {'degree': witness[0], 'exp': list(witness[1])}}
    emit(obj, _report(obj, 'ideal variety', {'ideal': digest}, result=result), 0 if witness is None else 1)


@ideal_group.command('indep')
@click.argument('path')
@degree_option
@leaf
def ideal_indep(obj, path, upto):
    I, digest = _load_truncated(obj, path, upto)
    faces = independence_complex(I)
    top = max((len(F) for F in faces), default=0)
    result = {'dimension': top, 'faces': len(faces), 'facets': [sorted(F) for F in faces if len(F) == top]}
    emit(obj, _report(obj, 'ideal indep', {'ideal': digest}, result=result))


# oracle

@cli.group('oracle')
def oracle_group():
    """Realisable ground truth over GF(q)."""


@oracle_group.command('trop-ideal')
@click.argument('path')
@click.option('--D', 'D', type=int, default=None, help='Truncation degree; defaults to the file or the config.')
@leaf
def oracle_trop_ideal(obj, path, D):
    I, digest = load_forms(path, D, obj['config'])
    result = {'hilbert': I.hilbert_table(), 'ideal': I.to_json()}
    emit(obj, _report(obj, 'oracle trop-ideal', {'forms': digest}, result=result))


@oracle_group.command('kronecker')
@click.argument('left')
@click.argument('right')
@click.option('--q', 'q', type=int, default=None, help='Field order for registered representations.')
@leaf
def oracle_kronecker(obj, left, right, q):
    A, d1 = load_field_matrix(left, q)
    B, d2 = load_field_matrix(right, q)
    _, rep = kronecker_quasiproduct(A, B)
    emit(obj, _report(obj, 'oracle kronecker', {'left': d1, 'right': d2}, result=rep.to_json()), 0 if rep.passed else 1)


# verify

@cli.group('verify')
def verify_group():
    """End-to-end verifications."""


@verify_group.command('vamos-theorem')
@click.option('--assume-lv-bound', 'lv_bound', type=int, default=None, help='Override the assumed quasi-product rank bound.')
@click.option('--no-lv-bound', is_flag=True, help='Drop the external bound entirely.')
@click.option('--pair', default='U23,vamos', show_default=True, help='The two summands, comma-separated.')
@leaf
def verify_vamos(obj, lv_bound, no_lv_bound, pair):
    parts = [p for p in pair.split(',') if p]
    if len(parts) != 2:
        raise ValueError("--pair needs two names, got [{}].".format(pair))
    theorem = run_theorem_pipeline(obj['config'], lv_bound=lv_bound, use_lv_bound=not no_lv_bound, pair=tuple(parts))
    citations = [a['citation'] for a in theorem.external_assumptions]
    report = _report(obj, 'verify vamos-theorem', result=theorem.to_json(), verdict=theorem.verdict, citations=citations)
    emit(obj, report, theorem.exit_code)


@verify_group.command('candidate')
@click.argument('path')
@click.option('--matroid', 'source', required=True)
@leaf
def verify_candidate(obj, path, source):
    I, d1 = load_ideal(path, obj['config'])
    M, d2 = load_matroid(source)
    rep = certify_candidate(I, M, obj['config'])
    table = hilbert_frame(rep.hilbert, rep.lower_bounds, rep.upper_bounds)
    result = dict(rep.to_json(), hilbert=frame_rows(table))
    result.pop('lower_bounds')
    result.pop('upper_bounds')
    emit(obj, _report(obj, 'verify candidate', {'ideal': d1, 'matroid': d2}, result=result), 0 if rep.certified else 1)
