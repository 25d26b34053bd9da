"""scikit-learn style front end for the projectivization pipeline."""
from __future__ import annotations

import logging

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import basis as _basis
from .adapt import adapt_all
from .certificates import SupportFunction, certify_lp, certify_sandwich
from .fan import Fan, f_vector, validate_fan
from .normals import ordered_normals

logger = logging.getLogger(__name__)


class InvalidFan(ValueError):
    pass


def check_fan(X, require_valid: bool = True, check_intersections: bool = True) -> Fan:
    """Coerce ``X`` to a :class:`Fan` and optionally require smooth + complete.

    Accepts a Fan, a ``(rays, cones)`` pair, or a mapping with ``rays`` and
    ``cones`` keys (as in a parsed fan file).
    """
    if isinstance(X, Fan):
        fan = X
    elif isinstance(X, dict):
        fan = Fan(tuple(map(tuple, X["rays"])), tuple(map(tuple, X["cones"])),
                  X.get("dim", 0))
    elif isinstance(X, (tuple, list)) and len(X) == 2:
        fan = Fan(tuple(map(tuple, X[0])), tuple(map(tuple, X[1])))
    else:
        raise TypeError(f"cannot interpret {type(X).__name__} as a fan")
    if require_valid:
        rep = validate_fan(fan, check_intersections=check_intersections)
        if not (rep.smooth and rep.complete):
            raise InvalidFan("fan must be smooth and complete: " + "; ".join(rep.diagnostics))
    return fan


class Projectivizer(TransformerMixin, BaseEstimator):
    """Basis-canonical projectivization of a smooth complete fan.

    ``fit`` extracts the wall normals of the input, adapts the fan to each of
    them in turn and (optionally) certifies the result.  ``transform`` adapts
    any smooth complete fan to the fitted normals.

    Parameters
    ----------
    basis : n x n integer matrix or None
        Columns give the ordered lattice basis; identity when None.
    early_stop : bool
        Stop as soon as an intermediate fan is projective.
    certify : {"lp", "sandwich", None}
        How to produce ``certificate_`` for the output fan.
    full_rescan : bool
        Debug mode: recompute the bad two-cones from scratch at every step.
    check_intersections : bool
        Run the pairwise cone-intersection test when validating input.
    """

    def __init__(self, basis=None, early_stop=False, certify="lp",
                 full_rescan=False, check_intersections=True):
        self.basis = basis
        self.early_stop = early_stop
        self.certify = certify
        self.full_rescan = full_rescan
        self.check_intersections = check_intersections

    def _to_working(self, fan: Fan) -> Fan:
        return fan if self.basis is None else _basis.to_basis(fan, self.basis)

    def fit(self, X, y=None):
        if self.certify not in ("lp", "sandwich", None):
            raise ValueError(f"certify must be 'lp', 'sandwich' or None, got {self.certify!r}")
        if self.certify == "sandwich" and self.early_stop:
            raise ValueError("the sandwich certificate needs the full run (early_stop=False)")
        fan = check_fan(X, check_intersections=self.check_intersections)
        work = self._to_working(fan)
        normals = ordered_normals(work)
        gamma, log = adapt_all(work, normals, early_stop=self.early_stop,
                               full_rescan=self.full_rescan)
        if self.certify == "lp":
            self.certificate_ = certify_lp(gamma)
        elif self.certify == "sandwich":
            self.certificate_ = certify_sandwich(work, gamma, log, normals)
        else:
            self.certificate_ = None
        self.input_fan_ = fan
        if self.basis is None:
            self.normals_, self.fan_, self.log_ = normals, gamma, log
        else:
            self.normals_ = tuple(_basis.covector_from_basis(m, self.basis) for m in normals)
            self.fan_ = _basis.from_basis(gamma, self.basis)
            self.log_ = _basis.log_from_basis(log, self.basis)
        self.n_blowups_ = self.log_.total
        self.f_vectors_ = (f_vector(fan), f_vector(self.fan_))
        return self

    def transform(self, X) -> Fan:
        check_is_fitted(self, "normals_")
        fan = check_fan(X, check_intersections=self.check_intersections)
        if fan == self.input_fan_:
            return self.fan_
        work = self._to_working(fan)
        normals = self.normals_ if self.basis is None else tuple(
            _basis.apply_transpose(self.basis, m) for m in self.normals_)
        gamma, _ = adapt_all(work, normals, full_rescan=self.full_rescan)
        return gamma if self.basis is None else _basis.from_basis(gamma, self.basis)

    @property
    def is_ample_(self) -> bool:
        check_is_fitted(self, "certificate_")
        return isinstance(self.certificate_, SupportFunction)
