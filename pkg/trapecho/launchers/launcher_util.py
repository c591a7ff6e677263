import datetime
import json
import os
import os.path as osp
import random
import traceback
from collections import OrderedDict, namedtuple

import dateutil.tz
import gtimer as gt
import numpy as np

import trapecho
from trapecho.core import logger
from trapecho.core.errors import (
    ConfigError,
    CsvFormatError,
    NumericalValidityError,
)
from trapecho.launchers import config
from trapecho.pythonplusplus import dict_to_safe_json

GitInfo = namedtuple(
    'GitInfo',
    [
        'directory',
        'commit_hash',
        'branch_name',
        'dirty',
    ],
)

# Artifacts written by a preset, and how `--plot` should render the first one.
PresetResult = namedtuple('PresetResult', ['artifacts', 'plot_kind', 'meta'])

META_FILE = 'meta.json'
CONFIG_FILE = 'config.json'
TEXT_LOG_FILE = 'debug.log'
TABULAR_LOG_FILE = 'progress.csv'


def get_git_infos(dirs):
    """
    Commit hash and branch of every directory that is a git checkout.
    Returns None when GitPython is unavailable.
    """
    try:
        import git
    except ImportError:
        return None
    git_infos = []
    for directory in dirs:
        try:
            repo = git.Repo(directory, search_parent_directories=True)
        except (git.exc.InvalidGitRepositoryError, git.exc.NoSuchPathError):
            continue
        try:
            branch_name = repo.active_branch.name
        except TypeError:
            branch_name = '[DETACHED]'
        try:
            commit_hash = repo.head.commit.hexsha
        except ValueError:
            # Repository without commits.
            commit_hash = None
        git_infos.append(GitInfo(
            directory=directory,
            commit_hash=commit_hash,
            branch_name=branch_name,
            dirty=repo.is_dirty(),
        ))
    return git_infos


def create_exp_name(exp_prefix, seed=0):
    now = datetime.datetime.now(dateutil.tz.tzlocal())
    timestamp = now.strftime('%Y_%m_%d_%H_%M_%S')
    return "%s_%s--s-%d" % (exp_prefix, timestamp, seed)


def create_log_dir(exp_prefix, seed=0, base_log_dir=None):
    """
    Fresh directory base_log_dir/exp_prefix/<exp_prefix>_<timestamp>--s-<seed>.
    """
    if base_log_dir is None:
        base_log_dir = config.LOCAL_LOG_DIR
    log_dir = osp.join(base_log_dir, exp_prefix,
                       create_exp_name(exp_prefix, seed=seed))
    if osp.exists(log_dir):
        logger.log("WARNING: Log directory already exists {}".format(log_dir))
    os.makedirs(log_dir, exist_ok=True)
    return log_dir


def setup_logger(
        exp_prefix="default",
        variant=None,
        text_log_file=TEXT_LOG_FILE,
        tabular_log_file=TABULAR_LOG_FILE,
        log_dir=None,
        seed=0,
        quiet=False,
):
    """
    Route text and tabular logs into the run directory and push the
    "[<exp_prefix>] " prefix.

    :param log_dir: Output directory; a timestamped one under LOCAL_LOG_DIR
    is created when None.
    :return: The log directory.
    """
    if log_dir is None:
        log_dir = create_log_dir(exp_prefix, seed=seed)
    else:
        os.makedirs(log_dir, exist_ok=True)
    logger.set_quiet(quiet)
    logger.add_text_output(osp.join(log_dir, text_log_file))
    logger.add_tabular_output(osp.join(log_dir, tabular_log_file))
    logger.push_prefix("[%s] " % exp_prefix)
    if variant is not None:
        logger.log("Variant:")
        logger.log(json.dumps(dict_to_safe_json(variant, sort=True),
                              indent=2))
    return log_dir


def set_seed(seed):
    seed = int(seed)
    random.seed(seed)
    np.random.seed(seed)


def reset_execution_environment():
    logger.reset()


def _remove_created(log_dir, existing, keep=(TEXT_LOG_FILE,)):
    for name in sorted(os.listdir(log_dir)):
        if name in existing or name in keep:
            continue
        path = osp.join(log_dir, name)
        if osp.isfile(path):
            os.remove(path)


def _log_timings():
    stamps = gt.get_times().stamps.cum
    for name, seconds in stamps.items():
        logger.log("time {}: {:.3f} s".format(name, seconds))


def run_experiment_here(
        experiment_function,
        experiment_config,
        exp_prefix="default",
        log_dir=None,
        full=False,
        quiet=False,
):
    """
    Run one preset in this process and write its artifacts plus meta.json.

    :param experiment_function: Called as
    experiment_function(experiment_config, log_dir, full) and returns a
    PresetResult.
    :param experiment_config: ExperimentConfig from `config.load_config`.
    :return: (exit code, PresetResult or None). On failure every file the
    run created, apart from the text log, is removed again.
    """
    reset_execution_environment()
    seed = experiment_config.scan['seed']
    existing = set(os.listdir(log_dir)) \
        if log_dir is not None and osp.isdir(log_dir) else set()
    log_dir = setup_logger(exp_prefix=exp_prefix,
                           variant=experiment_config.variant,
                           log_dir=log_dir, seed=seed, quiet=quiet)
    set_seed(seed)
    gt.reset()
    gt.set_def_unique(False)
    try:
        config.dump_config(experiment_config, osp.join(log_dir, CONFIG_FILE))
        result = experiment_function(experiment_config, log_dir, full)
        meta = OrderedDict(
            preset=exp_prefix,
            variant=experiment_config.variant,
            seed=seed,
            full=full,
            artifacts=list(result.artifacts) + [CONFIG_FILE],
        )
        meta.update(result.meta)
        meta['warnings'] = list(logger.warnings)
        meta['version'] = trapecho.__version__
        git_infos = get_git_infos([config.trapecho_project_dir])
        meta['git_commit'] = git_infos[0].commit_hash if git_infos else None
        logger.log_variant(osp.join(log_dir, META_FILE), meta)
        gt.stamp('write')
        _log_timings()
        logger.log("wrote {}".format(", ".join(result.artifacts)))
        code = 0
    except (ConfigError, NumericalValidityError, CsvFormatError) as e:
        logger.log("{}: {}".format(type(e).__name__, e))
        result = None
        code = e.exit_code
    except Exception:
        logger.log(traceback.format_exc())
        result = None
        code = 1
    finally:
        logger.close_outputs()
    if code != 0:
        _remove_created(log_dir, existing)
    return code, result
