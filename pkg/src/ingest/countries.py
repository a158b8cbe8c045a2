"""
Country metadata.

The bundled ``country_meta.json`` is the single alias table for country names.
Names are matched case-insensitively and exactly against the ISO-3 code, the
English name and the listed aliases; nothing is fuzzy-matched.
"""

from datetime import date
from functools import lru_cache
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from ..error import MetadataError

WEEKEND_CONVENTION = Literal["FriSat", "SatSun"]

# Monday == 0
WEEKEND_DAYS: Dict[str, Tuple[int, int]] = {
    "FriSat": (4, 5),
    "SatSun": (5, 6),
}

CHINESE_SET = Literal["baseline", "extended"]

_META_FILE = Path(__file__).parent / "country_meta.json"


class CountryMeta(BaseModel):
    """
    Static facts about one country.

    Attributes:
        country: ISO-3 identifier.
        name: English name.
        aliases: Additional accepted names.
        weekend_convention: Which two days form the weekend.
        chinese_vaccine: Baseline Chinese-vaccine dummy.
        extended_chinese: Extended-set dummy (a superset of the baseline one).
        population: Population in millions.
        panel: Member of the default multi-country panel.
        timeseries: Member of the default time-series set.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    country: str
    name: str
    aliases: Tuple[str, ...] = ()
    weekend_convention: WEEKEND_CONVENTION = "SatSun"
    chinese_vaccine: bool = False
    extended_chinese: bool = False
    population: float | None = None
    panel: bool = False
    timeseries: bool = False

    @model_validator(mode="before")
    @classmethod
    def _extended_contains_baseline(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("chinese_vaccine"):
            data = {**data, "extended_chinese": True}
        return data

    def chinese_flag(self, chinese_set: CHINESE_SET = "baseline") -> bool:
        """Return the Chinese-vaccine dummy for the requested country set."""
        return self.extended_chinese if chinese_set == "extended" else self.chinese_vaccine

    @property
    def weekend_days(self) -> Tuple[int, int]:
        return WEEKEND_DAYS[self.weekend_convention]


@lru_cache(maxsize=1)
def _load_table() -> Tuple[Dict[str, CountryMeta], Dict[str, str]]:
    with open(_META_FILE, encoding="utf-8") as f_in:
        raw = json.load(f_in)

    table: Dict[str, CountryMeta] = {}
    aliases: Dict[str, str] = {}
    for entry in raw["countries"]:
        meta = CountryMeta(
            country=entry["country"],
            name=entry["name"],
            aliases=tuple(entry.get("aliases", [])),
            weekend_convention=entry.get("weekend", "SatSun"),
            chinese_vaccine=entry.get("chinese", False),
            extended_chinese=entry.get("extended_chinese", False),
            population=entry.get("population"),
            panel=entry.get("panel", False),
            timeseries=entry.get("timeseries", False),
        )
        table[meta.country] = meta
        for name in (meta.country, meta.name, *meta.aliases):
            aliases[name.casefold()] = meta.country
    return table, aliases


def normalize_country(name: str) -> str:
    """
    Map a country name, code or alias to its ISO-3 identifier.

    Args:
        name: Name as found in an input file.

    Returns:
        str: ISO-3 identifier.

    Raises:
        MetadataError: If the name is not in the bundled alias table.

    Example:
        >>> normalize_country("united states")
        'USA'
    """
    _, aliases = _load_table()
    key = str(name).strip().casefold()
    if key not in aliases:
        raise MetadataError(str(name))
    return aliases[key]


def country_meta(country: str) -> CountryMeta:
    """
    Get the metadata of a country.

    Raises:
        MetadataError: If the country is unknown.
    """
    table, _ = _load_table()
    return table[normalize_country(country)]


def list_countries(group: Literal["panel", "timeseries", "all"] = "panel") -> List[str]:
    """List ISO-3 identifiers of a bundled country group, sorted."""
    table, _ = _load_table()
    if group == "all":
        return sorted(table)
    return sorted(code for code, meta in table.items() if getattr(meta, group))


def weekend_flag(country: str, day: date, meta: CountryMeta | None = None) -> int:
    """
    Weekend dummy for one country-day.

    Israel, the UAE and Bahrain use a Friday/Saturday weekend, every other
    country Saturday/Sunday.

    Args:
        country: Country name or identifier.
        day: Calendar day.
        meta: Metadata to use; looked up from the bundled table when omitted.

    Returns:
        int: 1 on a weekend day, else 0.

    Raises:
        MetadataError: If the country is unknown.
    """
    if meta is None:
        meta = country_meta(country)
    return int(day.weekday() in meta.weekend_days)
