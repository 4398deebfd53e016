"""Colored, leveled logging for *rcutils*.

The interface mirrors the one of ``mininet.log``: a set of module-level
functions (:py:func:`debug`, :py:func:`info`, :py:func:`output`,
:py:func:`warning`, :py:func:`error`, :py:func:`critical`) whose messages
carry their own trailing newline, and :py:func:`setLogLevel` to pick the
verbosity. Records are written to *stderr*, so that tables and data files
produced on *stdout* are never interleaved with log lines.

Possible **verbosity** values, listed from the most to less verbose, are the following:

- ``debug``
- ``info``
- ``output``
- ``warning``
- ``warn``
- ``error``
- ``critical``
"""

import sys
import logging


OUTPUT = 25

LEVELS = {'debug': logging.DEBUG,
          'info': logging.INFO,
          'output': OUTPUT,
          'warning': logging.WARNING,
          'warn': logging.WARNING,
          'error': logging.ERROR,
          'critical': logging.CRITICAL}

LOGLEVELDEFAULT = 'output'

LOGMSGFORMAT = '%(message)s'

logging.addLevelName(OUTPUT, 'OUTPUT')


class ShellStyles:
    """Shell styles."""
    reset='\033[0m'
    bold='\033[01m'
    disable='\033[02m'


class ShellFGColors:
    """Shell foreground colors."""
    red='\033[31m'
    yellow='\033[93m'


class ShellBGColors:
    """Shell background colors."""
    red='\033[41m'


LOG_FORMAT = {
    LEVELS['debug']: ShellStyles.disable,
    LEVELS['info']: ShellStyles.reset,
    LEVELS['output']: ShellStyles.bold,
    LEVELS['warning']: ShellStyles.bold + ShellFGColors.yellow,
    LEVELS['error']: ShellStyles.bold + ShellFGColors.red,
    LEVELS['critical']: ShellStyles.bold + ShellBGColors.red
}


class ColoredFormatter(logging.Formatter):
    """Get colored logs.

    Args:
        fmt (str)     : record format string
        colored (bool): whether to decorate records with shell styles
    """
    def __init__(self, fmt=LOGMSGFORMAT, colored=True):
        super().__init__(fmt)
        self.colored = colored

    def format(self, record):
        s = super().format(record)
        if not self.colored or not s:
            return s
        if record.levelno in LOG_FORMAT:
            s = LOG_FORMAT[record.levelno] + s
            if record.levelno == LEVELS['critical']:
                s += '\n'
        if s[-1] == '\n':
            s = s[:-1] + ShellStyles.reset + '\n'
        else:
            s += ShellStyles.reset
        return s


class StreamHandlerNoNewline(logging.StreamHandler):
    """Stream handler that does not append a newline to records,
    since every message already ends with its own.
    """
    def emit(self, record):
        try:
            msg = self.format(record)
            self.stream.write(msg)
            self.flush()
        except Exception:
            self.handleError(record)


lg = logging.getLogger('rcutils')
lg.propagate = False

ch = StreamHandlerNoNewline(sys.stderr)
ch.setFormatter(ColoredFormatter(LOGMSGFORMAT,
                                 colored=hasattr(sys.stderr, 'isatty') and sys.stderr.isatty()))
lg.addHandler(ch)
lg.setLevel(LEVELS[LOGLEVELDEFAULT])


def setLogLevel(levelname=LOGLEVELDEFAULT):
    """Sets the verbosity of the *rcutils* logger.

    Args:
        levelname (str): one of the keys of :py:data:`LEVELS`

    Raises:
        ValueError: if the level name is unknown.
    """
    if levelname not in LEVELS:
        raise ValueError('unknown log level {}, choose among {}.'.format(
            levelname, ', '.join(LEVELS)))
    lg.setLevel(LEVELS[levelname])


debug = lg.debug
info = lg.info
warning = lg.warning
warn = lg.warning
error = lg.error
critical = lg.critical


def output(msg, *args, **kwargs):
    """Logs a message at the ``output`` level."""
    lg.log(OUTPUT, msg, *args, **kwargs)


def excepthook(type, value, traceback):
    """Reports uncaught exceptions as critical records."""
    critical('', exc_info=(type, value, traceback))


def install_excepthook():
    """Routes uncaught exceptions to :py:func:`critical`. Only the
    command-line entry point installs it.
    """
    sys.excepthook = excepthook
