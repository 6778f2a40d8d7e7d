from argparse import Namespace
from fractions import Fraction

import pytest

from coop2nf.config import Config, load_config
from coop2nf.errors import ConfigError


def test_defaults():
    config = load_config(Namespace())
    assert config == Config()
    assert config.epsilons == (Fraction(1, 100), Fraction(1, 1000))


def test_overrides():
    config = load_config(Namespace(json=True, log_level='debug', seed=4, dense_limit=3,
                                   epsilons='1/10, 1/20', oracle_tol=1e-6, oracle_max_iter=50))
    assert config.json_output
    assert config.log_level == 'DEBUG'
    assert config.seed == 4
    assert config.dense_limit == 3
    assert config.epsilons == (Fraction(1, 10), Fraction(1, 20))
    assert config.oracle_max_iter == 50


def test_every_error_is_collected():
    with pytest.raises(ConfigError) as excinfo:
        load_config(Namespace(log_level='loud', seed=-1, dense_limit=9, epsilons='2',
                              oracle_tol=0.0, oracle_max_iter=0))
    assert len(excinfo.value.errors) == 6
