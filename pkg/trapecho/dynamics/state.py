"""
Joint internal x motional state.
"""
import numpy as np


class JointState(object):
    """
    Amplitudes on |1> (in the branch-1 eigenbasis) and on |2> (in the
    branch-2 eigenbasis), each an nd-array with one axis per Cartesian axis.

    :param detuning: Rotating-frame detuning omega_MW - omega_HF (internal
    angular frequency).
    :param time: Elapsed internal time.
    """
    def __init__(self, amp1, amp2, detuning=0.0, time=0.0):
        self.amp1 = np.asarray(amp1, dtype=complex)
        self.amp2 = np.asarray(amp2, dtype=complex)
        self.detuning = detuning
        self.time = time
        self.truncation_deficit = 0.0
        self.warnings = []

    def norm(self):
        return float(np.sum(np.abs(self.amp1) ** 2)
                     + np.sum(np.abs(self.amp2) ** 2))

    def population2(self):
        return float(np.sum(np.abs(self.amp2) ** 2))

    def evolved(self, amp1, amp2, time=None):
        state = JointState(amp1, amp2, self.detuning,
                           self.time if time is None else time)
        state.truncation_deficit = self.truncation_deficit
        state.warnings = list(self.warnings)
        return state

    @classmethod
    def initial(cls, system, n=0, detuning=0.0):
        """All population in |1> x |n>."""
        index = system.index(n)
        amp1 = np.zeros(system.shape1, dtype=complex)
        amp1[index] = 1.0
        amp2 = np.zeros(system.shape2, dtype=complex)
        return cls(amp1, amp2, detuning)
