"""
coop2nf: implement cooperative worth games (partition or characteristic
functions) as strategy-labeled normal-form games, and analyse the cooperative
games of linear-demand oligopolies.
"""

__version__ = '1.0.0'

from .cli import main, run  # noqa: E402

__all__ = ['__version__', 'main', 'run']
