"""Keyword generation from named attribute bits and hit-rate evaluation.

A naming table assigns a human-chosen name to the +1 polarity of some bits;
unnamed bits never produce keywords.  Names that coincide after trimming and
case-folding denote the same concept: their bits merge by logical OR (any
detector firing means the concept is present).  Keyword quality is the
fraction of emitted (item, keyword) pairs a human judged suitable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attributes import as_attribute_matrix

__all__ = [
    "NamingTable",
    "KeywordReport",
    "TruthTable",
    "HitRateReport",
    "nameable_count",
    "merge_duplicates",
    "generate_keywords",
    "evaluate_hit_rate",
]


def _canonical(name: str) -> str:
    return name.strip().casefold()


@dataclass(frozen=True)
class NamingTable:
    """Names for the +1 polarity of attribute bits; absent index = unnamed."""

    entries: dict[int, str]

    def __post_init__(self):
        cleaned = {}
        for idx, name in dict(self.entries).items():
            idx = int(idx)
            if idx < 0:
                raise ValueError(f"bit index must be >= 0, got {idx}")
            trimmed = str(name).strip()
            if not trimmed:
                raise ValueError(f"bit {idx} has an empty name")
            cleaned[idx] = trimmed
        object.__setattr__(self, "entries", cleaned)

    def check_width(self, k: int) -> None:
        """Ensure every named index addresses one of k bits."""
        for idx in self.entries:
            if idx >= k:
                raise ValueError(f"named bit {idx} out of range for {k} attributes")


def nameable_count(names: NamingTable) -> int:
    """Number of bits carrying a name."""
    return len(names.entries)


@dataclass(frozen=True)
class KeywordReport:
    """Per-item keyword lists plus the effective (deduplicated) vocabulary."""

    items: dict[str, tuple[str, ...]]
    vocabulary: tuple[str, ...]


@dataclass(frozen=True)
class TruthTable:
    """Human judgments: (item_id, keyword) -> suitable in {0, 1}.

    An optional item_id -> action-class map enables per-action slicing.
    """

    judgments: dict[tuple[str, str], int]
    actions: dict[str, str] | None = field(default=None)

    def __post_init__(self):
        cleaned = {}
        for key, suitable in dict(self.judgments).items():
            item, keyword = key
            suitable = int(suitable)
            if suitable not in (0, 1):
                raise ValueError(
                    f"suitability for ({item!r}, {keyword!r}) must be 0 or 1, "
                    f"got {suitable}"
                )
            cleaned[(str(item), str(keyword))] = suitable
        object.__setattr__(self, "judgments", cleaned)


@dataclass(frozen=True)
class HitRateReport:
    """Precision of emitted keywords against human judgments.

    Keywords in the vocabulary that were never emitted map to None rather
    than 0 (no evidence is not negative evidence); same for actions whose
    items emitted nothing.  per_action is None when no action table was
    supplied at all.
    """

    overall: float | None
    per_keyword: dict[str, float | None]
    per_action: dict[str, float | None] | None
    emitted: int
    suitable: int


def _group_by_name(names: NamingTable):
    # canonical name -> (first bit index, representative surface form,
    # member bit indices), insertion-ordered by first occurrence
    groups: dict[str, tuple[int, str, list[int]]] = {}
    for idx in sorted(names.entries):
        name = names.entries[idx]
        key = _canonical(name)
        if key in groups:
            groups[key][2].append(idx)
        else:
            groups[key] = (idx, name, [idx])
    return groups


def merge_duplicates(Z, names: NamingTable) -> tuple:
    """Collapse bits sharing a (case-folded, trimmed) name into one column.

    The merged column is +1 wherever any source bit is +1 (logical OR of
    presence) and keeps the position and surface form of the first
    occurrence.  Unnamed bits pass through unchanged.  Applying the merge a
    second time is a no-op.
    """
    Z = as_attribute_matrix(Z)
    names.check_width(Z.shape[1])
    groups = _group_by_name(names)
    first_of = {first: (surface, members) for first, surface, members in groups.values()}
    drop = {
        idx
        for first, surface, members in groups.values()
        for idx in members
        if idx != first
    }

    columns = []
    new_entries: dict[int, str] = {}
    for idx in range(Z.shape[1]):
        if idx in drop:
            continue
        if idx in first_of:
            surface, members = first_of[idx]
            merged = Z[:, members].max(axis=1)
            new_entries[len(columns)] = surface
            columns.append(merged)
        else:
            columns.append(Z[:, idx])
    return np.stack(columns, axis=1).astype(np.int8), NamingTable(new_entries)


def generate_keywords(Z, names: NamingTable, item_ids=None) -> KeywordReport:
    """Emit, per item, the names of its positive named bits.

    Bits without a name never emit.  Names are reduced to their canonical
    representative (the surface form of the first bit carrying that name),
    so an item's keyword list never repeats a keyword even if duplicate
    names were not merged beforehand; keywords appear in first-occurrence
    order of their name.  Item ids default to the row index as a string.
    """
    Z = as_attribute_matrix(Z)
    names.check_width(Z.shape[1])
    n = Z.shape[0]
    if item_ids is None:
        item_ids = [str(i) for i in range(n)]
    else:
        item_ids = [str(i) for i in item_ids]
        if len(item_ids) != n:
            raise ValueError(
                f"got {len(item_ids)} item ids for {n} instances"
            )
        if len(set(item_ids)) != len(item_ids):
            raise ValueError("item ids must be unique")

    groups = _group_by_name(names)
    vocabulary = tuple(surface for _, surface, _ in groups.values())

    items: dict[str, tuple[str, ...]] = {}
    for i, item in enumerate(item_ids):
        # a concept fires when any bit carrying its name is positive, so the
        # emission is identical whether or not duplicates were merged first
        items[item] = tuple(
            surface
            for _, surface, members in groups.values()
            if (Z[i, members] == 1).any()
        )
    return KeywordReport(items=items, vocabulary=vocabulary)


def evaluate_hit_rate(report: KeywordReport, truth: TruthTable) -> HitRateReport:
    """Score emitted keywords against human suitability judgments.

    Counts keyword instances: each emitted (item, keyword) pair contributes
    once.  Every emitted pair must be judged; missing pairs raise ValueError
    listing them.  per_keyword and per_action are precisions over the
    matching slices of emitted pairs.
    """
    pairs = [
        (item, keyword)
        for item, keywords in report.items.items()
        for keyword in keywords
    ]
    missing = [pair for pair in pairs if pair not in truth.judgments]
    if missing:
        listing = ", ".join(f"({item!r}, {kw!r})" for item, kw in missing[:10])
        suffix = "" if len(missing) <= 10 else f" and {len(missing) - 10} more"
        raise ValueError(f"missing suitability judgments for: {listing}{suffix}")

    emitted = len(pairs)
    suitable = sum(truth.judgments[pair] for pair in pairs)
    overall = suitable / emitted if emitted else None

    per_keyword: dict[str, float | None] = {}
    for word in report.vocabulary:
        hits = [truth.judgments[p] for p in pairs if p[1] == word]
        per_keyword[word] = sum(hits) / len(hits) if hits else None

    per_action: dict[str, float | None] | None = None
    if truth.actions is not None:
        per_action = {}
        unmapped = sorted(set(report.items) - set(truth.actions))
        if unmapped:
            raise ValueError(
                f"items missing from the action table: {', '.join(unmapped[:10])}"
            )
        for action in sorted(set(truth.actions.values())):
            hits = [
                truth.judgments[p]
                for p in pairs
                if truth.actions[p[0]] == action
            ]
            per_action[action] = sum(hits) / len(hits) if hits else None

    return HitRateReport(
        overall=overall,
        per_keyword=per_keyword,
        per_action=per_action,
        emitted=emitted,
        suitable=suitable,
    )
