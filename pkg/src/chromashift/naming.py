"""Nearest-name lookup in the 57-entry color dictionary.

The dictionary has 20 everyday color names, each carrying a light and a
dark variant except black (light only) and white (no variants), 57 rows in
total. A query is named by the entry with the smallest CIELAB delta-E 1976
distance; ties break toward the earlier row, so lookups are deterministic.
The table ships as a CSV (``name,variant,r,g,b``) and any file with the
same shape can be substituted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import colorspace

EXPECTED_ENTRIES = 57
_VARIANTS = ("base", "light", "dark")


@dataclass(frozen=True)
class ColorEntry:
    name: str
    variant: str  # "base", "light" or "dark"
    srgb: tuple[int, int, int]
    lab: np.ndarray

    @property
    def display_name(self) -> str:
        return self.name if self.variant == "base" else f"{self.variant} {self.name}"


@dataclass(frozen=True)
class ColorName:
    """Result of naming a color: the matched entry and its distance."""

    name: str
    variant: str
    distance: float

    @property
    def display_name(self) -> str:
        return self.name if self.variant == "base" else f"{self.variant} {self.name}"


class DictionaryError(ValueError):
    """The dictionary file is malformed or violates the entry rules."""


class ColorDictionary:
    def __init__(self, entries: list[ColorEntry]):
        self.entries = entries
        self._labs = np.array([e.lab for e in entries])

    def __len__(self) -> int:
        return len(self.entries)

    def nearest(self, rgb_linear, k: int = 1) -> list[ColorName]:
        """The k entries closest to a linear sRGB color, nearest first."""
        if not 1 <= k <= len(self.entries):
            raise ValueError(f"k must be in 1..{len(self.entries)}")
        lab = colorspace.lab_from_linear(rgb_linear)
        distances = colorspace.delta_e76(self._labs, lab)
        order = np.argsort(distances, kind="stable")[:k]
        return [
            ColorName(self.entries[i].name, self.entries[i].variant, float(distances[i]))
            for i in order
        ]


def _validate(entries: list[ColorEntry]) -> None:
    if len(entries) != EXPECTED_ENTRIES:
        raise DictionaryError(f"expected {EXPECTED_ENTRIES} entries, found {len(entries)}")
    seen_names = set()
    seen_rgb = set()
    variants: dict[str, set[str]] = {}
    for row, e in enumerate(entries, start=2):  # header is line 1
        if (e.name, e.variant) in seen_names:
            raise DictionaryError(f"duplicate entry '{e.display_name}' at row {row}")
        seen_names.add((e.name, e.variant))
        if e.srgb in seen_rgb:
            raise DictionaryError(f"duplicate sRGB value {e.srgb} at row {row}")
        seen_rgb.add(e.srgb)
        variants.setdefault(e.name, set()).add(e.variant)
    for name, have in variants.items():
        if "base" not in have:
            raise DictionaryError(f"color '{name}' is missing its base entry")
        extra = have - {"base"}
        if name == "white":
            expected = set()
        elif name == "black":
            expected = {"light"}
        else:
            expected = {"light", "dark"}
        if extra != expected:
            raise DictionaryError(
                f"color '{name}' has variants {sorted(extra)}, expected {sorted(expected)}"
            )


def load_dictionary(path) -> ColorDictionary:
    """Load and validate a dictionary CSV (header ``name,variant,r,g,b``)."""
    entries: list[ColorEntry] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["name", "variant", "r", "g", "b"]:
            raise DictionaryError(f"unexpected header {reader.fieldnames} in {path}")
        for row_no, row in enumerate(reader, start=2):
            try:
                name = row["name"].strip()
                variant = row["variant"].strip()
                rgb = tuple(int(row[ch]) for ch in ("r", "g", "b"))
            except (AttributeError, TypeError, ValueError) as err:
                raise DictionaryError(f"malformed row {row_no} in {path}: {row}") from err
            if not name or variant not in _VARIANTS:
                raise DictionaryError(f"malformed row {row_no} in {path}: {row}")
            if any(not 0 <= v <= 255 for v in rgb):
                raise DictionaryError(f"channel out of range at row {row_no} in {path}")
            lab = colorspace.lab_from_linear(colorspace.srgb_decode(np.array(rgb)))
            entries.append(ColorEntry(name, variant, rgb, lab))
    _validate(entries)
    return ColorDictionary(entries)


def default_dictionary_path() -> Path:
    return Path(str(resources.files("chromashift.data") / "color_names.csv"))


def load_default() -> ColorDictionary:
    return load_dictionary(default_dictionary_path())


def name_color(rgb_linear, dictionary: ColorDictionary) -> ColorName:
    """Name of the dictionary entry nearest to a linear sRGB color."""
    return dictionary.nearest(rgb_linear, k=1)[0]


def nearest_k(rgb_linear, dictionary: ColorDictionary, k: int) -> list[ColorName]:
    """The k nearest names in ascending distance order."""
    return dictionary.nearest(rgb_linear, k=k)
