"""JSON output with scalar arrays kept on one line."""
from __future__ import annotations

import json
import re

_FLAT = re.compile(r"\[\s*((?:\"[^\"\n]*\"|-?\d+|true|false|null)(?:,\s*(?:\"[^\"\n]*\"|-?\d+|true|false|null))*)\s*\]")


def dumps(obj) -> str:
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    return _FLAT.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text) + "\n"
