"""
Pulse sequences on the joint internal x motional state.
"""
from trapecho.dynamics.sequences import (
    Delay,
    Pulse,
    PulseSequence,
    apply_sudden_pulse,
    free_evolve,
    run_sequence,
)
from trapecho.dynamics.signals import (
    SignalTrace,
    axis_echo_table,
    axis_ramsey_table,
    echo_signal,
    echo_signal_dense,
    echo_trace,
    long_time_echo,
    ramsey_contrast,
    ramsey_fringe,
    ramsey_trace,
    survival_amplitude_dense,
)
from trapecho.dynamics.state import JointState
from trapecho.dynamics.system import BranchSystem, build_system

__all__ = [
    'Delay',
    'Pulse',
    'PulseSequence',
    'apply_sudden_pulse',
    'free_evolve',
    'run_sequence',
    'SignalTrace',
    'axis_echo_table',
    'axis_ramsey_table',
    'echo_signal',
    'echo_signal_dense',
    'echo_trace',
    'long_time_echo',
    'ramsey_contrast',
    'ramsey_fringe',
    'ramsey_trace',
    'survival_amplitude_dense',
    'JointState',
    'BranchSystem',
    'build_system',
]
