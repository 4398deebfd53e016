"""This module includes the small functions used in different parts of
the code: configuration loading, dictionary merging, list parsing and the
default degree of parallelism.
"""

import json

import psutil


def merge_dict(dst, src):
    """Merges source dictionary fields and subfields into destination dictionary.

    Args:
        dst (dict): destination dictionary
        src (dict): source dictionary
    """
    stack = [(dst, src)]
    while stack:
        current_dst, current_src = stack.pop()
        for key in current_src:
            if (key in current_dst and isinstance(current_src[key], dict)
                    and isinstance(current_dst[key], dict)):
                stack.append((current_dst[key], current_src[key]))
            else:
                current_dst[key] = current_src[key]


def load_conf(conf_file):
    """Load JSON experiment configuration file.

    Args:
        conf_file (str): path to the JSON configuration file

    Returns:
        dict: configuration dictionary.
    """
    with open(conf_file, 'r') as f:
        config = json.load(f)
    if not isinstance(config, dict):
        raise ValueError('{} does not contain a JSON object.'.format(conf_file))
    return config


def default_jobs():
    """Number of worker processes used when none is requested.

    Returns:
        int: the CPU count reported by *psutil*, or 1 if unknown.
    """
    return psutil.cpu_count() or 1


def parse_list(value, cast=float):
    """Parses a comma separated list.

    Args:
        value (str)             : text such as ``"2,3,5"``
        cast (types.FunctionType): conversion applied to every item

    Returns:
        list: the converted items.

    Example:
        ``"2.0, 2.2,2.455"`` with ``cast=float`` gives ``[2.0, 2.2, 2.455]``;
        a value that is already a list is converted item by item.
    """
    if isinstance(value, (list, tuple)):
        return [cast(item) for item in value]
    if isinstance(value, (int, float)):
        return [cast(value)]
    items = [item.strip() for item in str(value).split(',')]
    return [cast(item) for item in items if item]
