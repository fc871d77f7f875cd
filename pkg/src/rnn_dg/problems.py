"""Built-in manufactured model problems.

Source terms, boundary and initial data are hand-derived closed forms from the
manufactured exact solutions; the test suite cross-checks each against finite
differences.

* helmholtz_1d: u'' - lam*u = f on (0,1), exact
  u(x) = sin(4*pi*(x+0.1)) * cos(4*pi*(x+0.1)) = 0.5*sin(8*pi*(x+0.1)),
  assembled as -u'' + lam*u = -f.
* poisson_2d: -Laplace(u) = f on (0,1)^2, exact
  u(x,y) = exp(x+y) * sin(3*pi*x + 0.5*pi) * cos(pi*y + 0.2*pi).
* heat_1d: u_t - lam*u_xx = f on (0,1) x (0,1), exact
  u(t,x) = -exp(cos(pi*x + 3*pi) + t^2).
"""

from __future__ import annotations

import numpy as np

from .assembly_elliptic import EllipticProblem
from .assembly_spacetime import HeatProblem
from .geometry import Domain

EXAMPLES = ("helmholtz1d", "poisson2d", "heat1d")


def helmholtz_1d(lam: float) -> EllipticProblem:
    k = 8.0 * np.pi

    def exact(pts):
        x = pts[:, 0]
        return 0.5 * np.sin(k * (x + 0.1))

    def exact_grad(pts):
        x = pts[:, 0]
        return (0.5 * k * np.cos(k * (x + 0.1)))[:, None]

    def source(pts):
        # F = -u'' + lam*u  (u'' = -k^2 u)
        x = pts[:, 0]
        return (0.5 * k * k + 0.5 * lam) * np.sin(k * (x + 0.1))

    return EllipticProblem(
        domain=Domain(((0.0, 1.0),)),
        source=source,
        dirichlet=exact,
        reaction=float(lam),
        exact=exact,
        exact_grad=exact_grad,
    )


def _poisson_factors(x, y):
    ax = np.exp(x) * np.sin(3 * np.pi * x + 0.5 * np.pi)
    by = np.exp(y) * np.cos(np.pi * y + 0.2 * np.pi)
    return ax, by


def poisson_2d() -> EllipticProblem:
    def exact(pts):
        ax, by = _poisson_factors(pts[:, 0], pts[:, 1])
        return ax * by

    def exact_grad(pts):
        x, y = pts[:, 0], pts[:, 1]
        ax, by = _poisson_factors(x, y)
        dax = np.exp(x) * (
            np.sin(3 * np.pi * x + 0.5 * np.pi)
            + 3 * np.pi * np.cos(3 * np.pi * x + 0.5 * np.pi)
        )
        dby = np.exp(y) * (
            np.cos(np.pi * y + 0.2 * np.pi)
            - np.pi * np.sin(np.pi * y + 0.2 * np.pi)
        )
        return np.column_stack([dax * by, ax * dby])

    def source(pts):
        # F = -Laplace(u) with u = A(x) B(y)
        x, y = pts[:, 0], pts[:, 1]
        ax, by = _poisson_factors(x, y)
        d2ax = np.exp(x) * (
            (1 - 9 * np.pi**2) * np.sin(3 * np.pi * x + 0.5 * np.pi)
            + 6 * np.pi * np.cos(3 * np.pi * x + 0.5 * np.pi)
        )
        d2by = np.exp(y) * (
            (1 - np.pi**2) * np.cos(np.pi * y + 0.2 * np.pi)
            - 2 * np.pi * np.sin(np.pi * y + 0.2 * np.pi)
        )
        return -(d2ax * by + ax * d2by)

    return EllipticProblem(
        domain=Domain(((0.0, 1.0), (0.0, 1.0))),
        source=source,
        dirichlet=exact,
        reaction=0.0,
        exact=exact,
        exact_grad=exact_grad,
    )


def heat_1d(lam: float) -> HeatProblem:
    def exact(pts):
        t, x = pts[:, 0], pts[:, 1]
        return -np.exp(np.cos(np.pi * x + 3 * np.pi) + t * t)

    def exact_grad(pts):
        t, x = pts[:, 0], pts[:, 1]
        u = exact(pts)
        return np.column_stack([2 * t * u, -np.pi * np.sin(np.pi * x + 3 * np.pi) * u])

    def source(pts):
        # f = u_t - lam*u_xx with u_xx = pi^2 (sin^2 - cos) u at pi*x + 3*pi
        t, x = pts[:, 0], pts[:, 1]
        u = exact(pts)
        s = np.sin(np.pi * x + 3 * np.pi)
        ccc = np.cos(np.pi * x + 3 * np.pi)
        return (2 * t - lam * np.pi**2 * (s * s - ccc)) * u

    def initial(x_pts):
        x = x_pts[:, 0]
        return -np.exp(np.cos(np.pi * x + 3 * np.pi))

    return HeatProblem(
        domain=Domain(((0.0, 1.0), (0.0, 1.0)), temporal=True),
        diffusivity=float(lam),
        source=source,
        initial=initial,
        boundary=exact,
        exact=exact,
        exact_grad=exact_grad,
    )


def make_problem(example: str, lam: float):
    if example == "helmholtz1d":
        return helmholtz_1d(lam)
    if example == "poisson2d":
        return poisson_2d()
    if example == "heat1d":
        return heat_1d(lam)
    raise ValueError(f"unknown example {example!r}; pick one of {EXAMPLES}")
