"""Minimal estimator plumbing so the algorithms compose with sklearn-style tooling."""

import inspect


class NotFittedError(RuntimeError):
    """Raised when a fitted attribute is requested before fit()."""


class BaseEstimator:
    """get_params/set_params support, derived from __init__ keyword arguments.

    Subclasses follow the usual convention: every constructor argument is
    stored unmodified on self under the same name, and fitted state lives in
    trailing-underscore attributes.
    """

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        skip = (inspect.Parameter.VAR_KEYWORD, inspect.Parameter.VAR_POSITIONAL)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind not in skip
        ]

    def get_params(self, deep=True):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"

    def _check_fitted(self, attr):
        if not hasattr(self, attr):
            raise NotFittedError(
                f"{type(self).__name__} instance is not fitted yet; call fit() first"
            )
