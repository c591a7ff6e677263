"""
Grid sweeps over variant dicts.
"""
import copy
import itertools

import trapecho.pythonplusplus as ppp


class DeterministicHyperparameterSweeper(object):
    """
    Do a grid search over a predefined set of variant entries.
    """
    def __init__(self, hyperparameters, default_parameters=None):
        """
        :param hyperparameters: A dictionary of the form
        ```
        {
            'trap.wavelength_lambda': [805e-9, 798.25e-9, 796.25e-9],
            'trap.gravity_enabled': [True, False],
        }
        ```
        Keys use dotted paths into the variant.
        :param default_parameters: Variant that every grid point starts from.
        """
        self._hyperparameters = hyperparameters
        self._default_kwargs = default_parameters or {}
        named_hyperparameters = [
            [(name, v) for v in values]
            for name, values in self._hyperparameters.items()
        ]
        self._hyperparameters_dicts = [
            ppp.dot_map_dict_to_nested_dict(dict(tuple_list))
            for tuple_list in itertools.product(*named_hyperparameters)
        ]

    def iterate_hyperparameters(self):
        """
        :return: List of full variants, one per grid point, in the order
        of itertools.product over the given values.
        """
        return [
            ppp.merge_recursive_dicts(
                copy.deepcopy(self._default_kwargs),
                hyperparameters,
            )
            for hyperparameters in self._hyperparameters_dicts
        ]
