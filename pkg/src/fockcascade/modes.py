"""Mode bookkeeping for multimode bosonic systems.

A :class:`ModeRegistry` fixes an ordered set of mode labels together with the
numerical policy (photon cap, pruning threshold) shared by every polynomial
built over it.  Registries are immutable; removing a measured mode produces a
new, smaller registry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RegistryMismatchError

DEFAULT_PHOTON_CAP = 20
DEFAULT_PRUNE_TOL = 1e-12


@dataclass(frozen=True)
class ModeRegistry:
    """Ordered collection of uniquely labelled bosonic modes.

    The registry index of a label is its position in ``labels``; indices are
    dense in ``[0, size)``.  ``photon_cap`` bounds the per-mode occupation any
    polynomial over this registry may carry (factorials stay exactly
    representable in double precision), and ``prune_tol`` is the relative
    coefficient threshold below which arithmetic drops a term.
    """

    labels: tuple[str, ...]
    photon_cap: int = DEFAULT_PHOTON_CAP
    prune_tol: float = DEFAULT_PRUNE_TOL
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # A zero-mode registry is the legal end state of measuring out every
        # mode of a cascade; polynomials over it are plain scalars.
        labels = tuple(str(lab) for lab in self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate mode labels in {labels}")
        if self.photon_cap < 1:
            raise ValueError("photon cap must be positive")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {lab: k for k, lab in enumerate(labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"mode {label!r} not in registry {self.labels}") from None

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def without(self, label: str) -> "ModeRegistry":
        """Registry with one mode removed, order and policy preserved."""
        if label not in self._index:
            raise KeyError(f"mode {label!r} not in registry {self.labels}")
        kept = tuple(lab for lab in self.labels if lab != label)
        return ModeRegistry(kept, self.photon_cap, self.prune_tol)

    def require_same(self, other: "ModeRegistry") -> None:
        """Raise RegistryMismatchError unless ``other`` is structurally equal."""
        if self != other:
            raise RegistryMismatchError(
                f"registries differ: {self.labels} (cap={self.photon_cap}) vs "
                f"{other.labels} (cap={other.photon_cap})"
            )
