"""
General purpose Python helpers that don't belong to any physics module.
"""
import collections.abc
import copy


"""
Dictionary methods
"""


def dot_map_dict_to_nested_dict(dot_map_dict):
    """
    Convert
    ```
    {'trap.wavelength_lambda': 805e-9, 'numerics.solver': 'fd'}
    ```
    into
    ```
    {'trap': {'wavelength_lambda': 805e-9}, 'numerics': {'solver': 'fd'}}
    ```
    """
    tree = {}
    for key, item in dot_map_dict.items():
        *parents, leaf = key.split('.')
        node = tree
        for parent in parents:
            node = node.setdefault(parent, {})
            if not isinstance(node, dict):
                raise TypeError(
                    "Key inside dot map must point to dictionary: {}".format(
                        key))
        if leaf in node:
            raise ValueError("Duplicate key: {}".format(key))
        node[leaf] = item
    return tree


def nested_dict_to_dot_map_dict(d, parent_key=''):
    """
    :param d: e.g. {'a': {'b': 2, 'c': 3}}
    :return: e.g. {'a.b': 2, 'a.c': 3}
    """
    flat = {}
    for key, value in d.items():
        dotted = parent_key + "." + key if parent_key else key
        if isinstance(value, collections.abc.Mapping) and value:
            flat.update(nested_dict_to_dot_map_dict(value, dotted))
        else:
            flat[dotted] = value
    return flat


def merge_recursive_dicts(base, override, path=None, allow_new_keys=True):
    """
    Return a deep copy of `base` updated with `override`.

    Nested dicts are merged key by key; any other value in `override`
    replaces the one in `base`.

    :param allow_new_keys: If False, a key of `override` that does not
    exist in `base` raises KeyError carrying the dotted path.
    """
    if path is None:
        path = []
    merged = copy.deepcopy(base)
    for key, value in override.items():
        dotted = path + [str(key)]
        if key not in merged:
            if not allow_new_keys:
                raise KeyError('.'.join(dotted))
            merged[key] = copy.deepcopy(value)
        elif isinstance(merged[key], dict) and isinstance(value, dict):
            merged[key] = merge_recursive_dicts(
                merged[key], value, dotted, allow_new_keys=allow_new_keys)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def safe_json(data):
    if data is None:
        return True
    elif isinstance(data, (bool, int, float, str)):
        return True
    elif isinstance(data, (tuple, list)):
        return all(safe_json(x) for x in data)
    elif isinstance(data, dict):
        return all(isinstance(k, str) and safe_json(v)
                   for k, v in data.items())
    return False


def dict_to_safe_json(d, sort=False):
    """
    Convert each value in the dictionary into a JSON'able primitive.
    """
    new_d = {}
    for key, item in d.items():
        if safe_json(item):
            new_d[key] = item
        elif isinstance(item, dict):
            new_d[key] = dict_to_safe_json(item, sort=sort)
        else:
            new_d[key] = str(item)
    if sort:
        return collections.OrderedDict(sorted(new_d.items()))
    return new_d


def batch(sequence, n=1):
    """Split `sequence` into consecutive slices of length `n`."""
    for start in range(0, len(sequence), n):
        yield sequence[start:start + n]
