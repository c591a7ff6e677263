from trapecho.util.hyperparameter import DeterministicHyperparameterSweeper


def test_sweeper_enumerates_product_in_order():
    sweeper = DeterministicHyperparameterSweeper(
        {'trap.gravity_enabled': [True, False],
         'scan.seed': [0, 1, 2]},
        default_parameters={'trap': {'kind': 'harmonic'}},
    )
    variants = sweeper.iterate_hyperparameters()
    assert len(variants) == 6
    assert variants[0] == {'trap': {'kind': 'harmonic',
                                    'gravity_enabled': True},
                           'scan': {'seed': 0}}
    assert [v['scan']['seed'] for v in variants] == [0, 1, 2, 0, 1, 2]
    assert [v['trap']['gravity_enabled'] for v in variants[2:4]] == [
        True, False]


def test_defaults_are_not_shared():
    defaults = {'trap': {'kind': 'harmonic'}}
    sweeper = DeterministicHyperparameterSweeper({'scan.seed': [0, 1]},
                                                 defaults)
    first, second = sweeper.iterate_hyperparameters()
    first['trap']['kind'] = 'gaussian'
    assert second['trap']['kind'] == 'harmonic'
    assert defaults == {'trap': {'kind': 'harmonic'}}
