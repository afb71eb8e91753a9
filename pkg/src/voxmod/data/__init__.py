"""Packaged fixture data: gazetteer, aliases, category rules, tag registry."""

import json
from importlib import resources

from ..moderation import TagRegistry
from ..text.categorize import CategoryRuleSet
from ..text.gazetteer import Gazetteer, parse_gazetteer


def _read(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def fixture_gazetteer() -> Gazetteer:
    return parse_gazetteer(_read("gazetteer.csv"), _read("aliases.csv"))


def fixture_category_rules() -> CategoryRuleSet:
    return CategoryRuleSet.from_json(_read("category_rules.json"))


def fixture_tag_registry(allow_free_text: bool = False) -> TagRegistry:
    doc = json.loads(_read("tags.json"))
    return TagRegistry(tags=frozenset(doc["tags"]), allow_free_text=allow_free_text)
