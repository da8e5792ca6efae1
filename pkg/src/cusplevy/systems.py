"""Uniform driver interface over the two dynamics.

Both systems expose cross-section starts and chunked orbit tracing with
named coordinate columns and an in-cross-section mask, so the diagnostic and
path pipelines run unchanged on either one.
"""

import numpy as np
from dataclasses import dataclass

from . import _pykernels as _ref
from . import billiard as B
from . import intermittent as I
from .backend import kernels as K


@dataclass
class BilliardSystem:
    geom: B.TableGeometry
    chunk: int = 1 << 16
    columns = ("curve", "r", "theta", "x", "y")

    @property
    def alpha(self) -> float:
        return self.geom.alpha

    def start_in_cross_section(self, seed: int, stream: int):
        curve, par, theta, _ = B.sample_invariant_arrays(
            self.geom, seed, 1, cross_section=True, stream=stream
        )
        return (int(curve[0]), float(par[0]), float(theta[0]))

    def start_in_full_space(self, seed: int, stream: int):
        curve, par, theta, _ = B.sample_invariant_arrays(self.geom, seed, 1, stream=stream)
        return (int(curve[0]), float(par[0]), float(theta[0]))

    def state_columns(self, state) -> dict:
        curve, par, theta = state
        kg = self.geom.kernel_geom()
        x, y, *_ = K.boundary_local(kg, curve, par)
        return {
            "curve": np.array([float(curve) + 1.0]),
            "r": np.array([float(K.global_r(kg, curve, par))]),
            "theta": np.array([theta]),
            "x": np.array([x]),
            "y": np.array([y]),
        }

    def trace_chunk(self, state, nsteps: int | None = None):
        nsteps = nsteps or self.chunk
        cols, in_x, state, done, status = B.trace_orbit_arrays(self.geom, state, nsteps)
        return cols, in_x, state, done, status


@dataclass
class IntermittentSystem:
    imap: I.IntermittentMap
    burn_in: int = 1000
    chunk: int = 1 << 16
    columns = ("x",)

    @property
    def alpha(self) -> float:
        return self.imap.alpha

    def start_in_cross_section(self, seed: int, stream: int):
        return I.cross_section_start(self.imap, seed, stream, self.burn_in)

    def start_in_full_space(self, seed: int, stream: int):
        return I.acim_start(self.imap, seed, stream, self.burn_in)

    def state_columns(self, state) -> dict:
        return {"x": np.array([float(state)])}

    def trace_chunk(self, state, nsteps: int | None = None):
        nsteps = nsteps or self.chunk
        xs = np.empty(nsteps + 1)
        K.imap_trace(self.imap.code, self.imap.alpha, self.imap.b, float(state), nsteps + 1, xs)
        future = xs[1:]
        cols = {"x": future}
        in_x = future >= 0.5
        return cols, in_x, float(future[-1]), nsteps, _ref.OK
