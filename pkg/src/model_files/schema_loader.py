import fnmatch
import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

SCHEMA_DIR = Path(__file__).parent / "schemas"

_SCHEMA_FILES = {
    "model_file": "model_file.schema.json",
    "report_record": "report_record.schema.json",
}


@lru_cache(maxsize=None)
def load_schemas() -> dict:
    """Loads every schema from the schemas directory, keyed by document kind."""
    logger.debug("Loading schemas from %s", SCHEMA_DIR)
    schemas = {}
    for kind, filename in _SCHEMA_FILES.items():
        with open(SCHEMA_DIR / filename) as f:
            schemas[kind] = json.load(f)
    return schemas


def get_schema(schemas: dict, kind: str) -> Optional[dict]:
    """Retrieves the schema for a document kind, allowing wildcard keys."""
    for pattern, schema in schemas.items():
        if fnmatch.fnmatch(kind, pattern):
            return schema
    return None
