"""File formats of ``rcrun``.

A complex is stored as a line-oriented *ComplexFile*::

    # rcrun 0.1 sample n=5 d=2 c=1.0 seed=1
    n 5
    d 2
    simplices 2
    0 1 2
    0 1 3

Lines starting with ``#`` and blank lines are ignored. The three keys come
first, in this order, followed by exactly ``simplices`` lines, each holding
the strictly increasing vertices of one simplex. Simplices are written in
lexicographic order.

Tables are written as CSV with a leading ``#`` line that echoes the tool
version and every parameter, or as JSON objects with the same field names.
"""

import csv
import json

from rcutils import __version__
from rcutils.complexlib.complex import Complex


class ComplexFileError(Exception):
    """Exception raised for a malformed ComplexFile.

    Args:
        message (str): what is wrong
        line (int)   : 1-based line number (**None** for end of file)
    """

    def __init__(self, message, line=None):
        self.line = line
        where = 'line {}'.format(line) if line is not None else 'end of file'
        self.message = '{}: {}'.format(where, message)
        super().__init__('ComplexFileError: {}'.format(self.message))

    def __str__(self):
        return self.message


def header_line(command, params):
    """Returns the provenance comment ``# rcrun <version> <command> k=v ...``.

    Args:
        command (str) : subcommand name
        params (dict) : parameters to echo, in order
    """
    echo = ' '.join('{}={}'.format(key, _echo(value)) for key, value in params.items())
    return '# rcrun {} {} {}'.format(__version__, command, echo).rstrip()


def _echo(value):
    if isinstance(value, (list, tuple)):
        return ','.join(str(item) for item in value)
    return value


def dumps_complex(Y, header=None):
    """Serializes a complex.

    Args:
        Y (Complex) : the complex
        header (str): comment line written first

    Returns:
        str: the ComplexFile text.
    """
    lines = [header] if header else []
    lines.append('n {}'.format(Y.n))
    lines.append('d {}'.format(Y.d))
    lines.append('simplices {}'.format(Y.f_d))
    lines.extend(' '.join(str(v) for v in sigma) for sigma in Y.simplices)
    return '\n'.join(lines) + '\n'


def _content_lines(text):
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith('#'):
            yield number, line


def _key_value(lines, key):
    try:
        number, line = next(lines)
    except StopIteration:
        raise ComplexFileError('missing "{}" line'.format(key))
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise ComplexFileError('expected "{} <int>", got "{}"'.format(key, line), number)
    try:
        value = int(parts[1])
    except ValueError:
        raise ComplexFileError('"{}" is not an integer'.format(parts[1]), number)
    if value < 0:
        raise ComplexFileError('{} must be nonnegative'.format(key), number)
    return value


def loads_complex(text):
    """Parses a ComplexFile.

    Args:
        text (str): the file content

    Returns:
        Complex: the complex.

    Raises:
        ComplexFileError: on the first malformed line, with its number.
    """
    lines = _content_lines(text)
    n = _key_value(lines, 'n')
    d = _key_value(lines, 'd')
    if d < 1:
        raise ComplexFileError('d must be at least 1')
    if n < d + 1:
        raise ComplexFileError('n must be at least d+1')
    count = _key_value(lines, 'simplices')
    simplices = []
    seen = set()
    for number, line in lines:
        if len(simplices) == count:
            raise ComplexFileError('more than {} simplices'.format(count), number)
        try:
            sigma = tuple(int(v) for v in line.split())
        except ValueError:
            raise ComplexFileError('non-integer vertex in "{}"'.format(line), number)
        if len(sigma) != d + 1:
            raise ComplexFileError('expected {} vertices, got {}'.format(d + 1, len(sigma)), number)
        if any(a >= b for a, b in zip(sigma, sigma[1:])):
            raise ComplexFileError('vertices are not strictly increasing', number)
        if sigma[0] < 0 or sigma[-1] >= n:
            raise ComplexFileError('vertex out of range [0, {})'.format(n), number)
        if sigma in seen:
            raise ComplexFileError('duplicate simplex {}'.format(sigma), number)
        seen.add(sigma)
        simplices.append(sigma)
    if len(simplices) != count:
        raise ComplexFileError('expected {} simplices, found {}'.format(count, len(simplices)))
    return Complex(n, d, simplices, check=False)


def write_complex(Y, path, header=None):
    """Writes a complex to ``path``."""
    with open(path, 'w') as f:
        f.write(dumps_complex(Y, header))


def read_complex(path):
    """Reads a complex from ``path``."""
    with open(path, 'r') as f:
        return loads_complex(f.read())


def _csv_value(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return value


def write_csv(stream, fieldnames, rows, header=None):
    """Writes rows as CSV.

    Args:
        stream (file)    : text stream
        fieldnames (list): column names
        rows (iterable)  : dictionaries keyed by ``fieldnames``
        header (str)     : provenance comment written first

    Note:
        **None** becomes an empty cell and booleans ``true``/``false``.
    """
    if header:
        stream.write(header + '\n')
    writer = csv.DictWriter(stream, fieldnames=fieldnames, lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _csv_value(row.get(key)) for key in fieldnames})


def write_json(stream, command, params, rows, **extra):
    """Writes a JSON document with the version, the parameter echo and the rows.

    Args:
        stream (file)  : text stream
        command (str)  : subcommand name
        params (dict)  : parameters
        rows (list)    : dictionaries, written with their own field names
        **extra        : further top-level entries
    """
    document = {'version': __version__, 'command': command, 'params': params, 'rows': list(rows)}
    document.update(extra)
    json.dump(document, stream, indent=2)
    stream.write('\n')
