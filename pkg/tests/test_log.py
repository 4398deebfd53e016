import logging

import pytest

from rcutils.complexlib.log import (LEVELS, LOGLEVELDEFAULT, ColoredFormatter, ShellFGColors,
                                    ShellStyles, lg, setLogLevel)


def make_record(level, msg):
    return logging.LogRecord('rcutils', level, __file__, 1, msg, None, None)


def test_warn_is_styled_as_warning():
    formatter = ColoredFormatter(colored=True)
    assert LEVELS['warn'] == LEVELS['warning']
    text = formatter.format(make_record(LEVELS['warn'], 'careful\n'))
    assert text == ShellStyles.bold + ShellFGColors.yellow + 'careful' + ShellStyles.reset + '\n'


def test_uncolored_records_are_left_alone():
    formatter = ColoredFormatter(colored=False)
    assert formatter.format(make_record(LEVELS['output'], 'done\n')) == 'done\n'


def test_set_log_level():
    try:
        setLogLevel('debug')
        assert lg.level == logging.DEBUG
        with pytest.raises(ValueError):
            setLogLevel('loud')
    finally:
        setLogLevel(LOGLEVELDEFAULT)
    assert lg.level == LEVELS['output']
