import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

BASE_DIR = Path(__file__).resolve().parent.parent
SETTINGS_PATH = BASE_DIR / "data" / "settings.json"

DEFAULT_SETTINGS: Dict[str, Any] = {
    "iso_budget": 4096,  # candidate morphisms per search
    "combination_coefficients": [-2, -1, 1, 2],
    "max_combination_terms": 3,
    "max_path_classes": 200000,
    "serial_n": 4,
    "serial_window": "-14:6",
    "qsl2_window": 10,
    "qsl2_kmax": 3,
    "qsl2_nmax": 4,
    "qsl2_depth": 2,
    "census_samples": 12,
    "census_seed": 7,
}


@lru_cache(maxsize=1)
def _read_settings_file() -> Dict[str, Any]:
    if SETTINGS_PATH.exists():
        return json.loads(SETTINGS_PATH.read_text(encoding="utf-8"))
    return {}


def load_settings() -> Dict[str, Any]:
    settings = DEFAULT_SETTINGS.copy()
    settings.update(_read_settings_file())
    return settings
