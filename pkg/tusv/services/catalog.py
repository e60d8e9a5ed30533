"""Loader for the embedded catalog data file."""

import logging
from functools import lru_cache
from importlib import resources

from tusv.core.generators import TernaryForm
from tusv.core.grammar import parse_form, parse_term
from tusv.schemas.catalog import AnchorClaim, Catalog, TheoremList

logger = logging.getLogger(__name__)

CATALOG_RESOURCE = "catalog.json"


@lru_cache
def load_catalog() -> Catalog:
    """Read and validate tusv/data/catalog.json once per process."""
    text = resources.files("tusv.data").joinpath(CATALOG_RESOURCE).read_text(encoding="utf-8")
    catalog = Catalog.model_validate_json(text)
    logger.debug(
        f"Loaded catalog v{catalog.version}: {len(catalog.theorems)} lists, "
        f"{len(catalog.witnesses)} witnesses, {len(catalog.anchors)} anchors"
    )
    return catalog


def get_theorem(which: str) -> TheoremList:
    """
    Look up a published list by key.

    Raises:
        ValueError: if the key is unknown
    """
    theorems = load_catalog().theorems
    if which not in theorems:
        raise ValueError(f"unknown list {which!r}; choose from {', '.join(sorted(theorems))}")
    return theorems[which]


def errata_for(which: str) -> set[tuple[int, ...]]:
    return {tuple(e.params) for e in load_catalog().errata if e.theorem == which}


def theorem_1_4_forms() -> list[TernaryForm]:
    return [parse_form(text) for text in load_catalog().theorem_1_4]


def conjecture_1_2_forms() -> list[TernaryForm]:
    return [parse_form(text) for text in load_catalog().conjecture_1_2]


def anchor_fixed(claim: AnchorClaim):
    return tuple(parse_term(text) for text in claim.fixed)
