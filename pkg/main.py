from utils.cli import cli


def entrance():
    """
    Entrance function for the tropmat command line
    """
    cli(prog_name='tropmat')


def main():
    entrance()


if __name__ == '__main__':
    main()
