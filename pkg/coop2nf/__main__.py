"""Entry point for ``python -m coop2nf``."""

from coop2nf import main

if __name__ == '__main__':
    main()
