"""
Design Loader Module
Reads and writes design files (JSON) with exact entries

File layout:
    {
      "name": "icosahedron",                  (optional)
      "geometry": {"rank": 2, "degree": 2},
      "radicand": 5,                          (needed when entries are irrational)
      "gram": [[...], ...]                    (or "points" for rank 2)
      "squared_norm": ...                     (optional, with "points")
    }
Entries are "p/q" strings or {"a": "p/q", "b": "p/q"} meaning a + b*sqrt(radicand).
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from src.design import DesignInstance, DesignSource, gram_from_sphere_points, validate_gram
from src.exactnum import decode_value, encode_value, is_square_free
from src.exceptions import DesignFormatError
from src.jacobi import GeometryParams

logger = logging.getLogger(__name__)


class DesignLoader:
    """Load and save designs in the JSON design format"""

    def __init__(self, config: Optional[Dict] = None):
        self.config = config or {}
        self.indent = self.config.get('output', {}).get('indent', 2)

    def load(self, path) -> DesignInstance:
        """Load and validate a design file"""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Design file not found: {path}")
        logger.info(f"Loading design from {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise DesignFormatError(f"{path}: invalid JSON ({e})") from e
        design = self.from_dict(data)
        logger.info(f"Loaded {design.size} points on {design.geom}")
        return design

    def from_dict(self, data: Dict[str, Any]) -> DesignInstance:
        if not isinstance(data, dict):
            raise DesignFormatError("Design file must hold a JSON object")
        geom = self._geometry(data.get('geometry'))
        radicand = data.get('radicand')
        if radicand is not None and (not isinstance(radicand, int) or isinstance(radicand, bool)):
            raise DesignFormatError(f"Radicand must be an integer, got {radicand!r}")
        if radicand is not None and (radicand < 2 or not is_square_free(radicand)):
            raise DesignFormatError(f"Radicand must be square-free and >= 2, got {radicand}")
        name = data.get('name')

        has_points = 'points' in data
        has_gram = 'gram' in data
        if has_points == has_gram:
            raise DesignFormatError("Design file needs exactly one of 'points' or 'gram'")

        if has_gram:
            matrix = self._matrix(data['gram'], radicand, 'gram')
            return validate_gram(matrix, geom, radicand, name=name)

        points = self._matrix(data['points'], radicand, 'points')
        squared_norm = self._entry(data.get('squared_norm', '1'), radicand, 'squared_norm')
        return gram_from_sphere_points(points, geom, radicand, squared_norm=squared_norm, name=name)

    def to_dict(self, design: DesignInstance) -> Dict[str, Any]:
        """Serializable form; points are kept when the design came from points"""
        data: Dict[str, Any] = {}
        if design.name:
            data['name'] = design.name
        data['geometry'] = {'rank': design.geom.rho, 'degree': design.geom.degree}
        if design.radicand is not None:
            data['radicand'] = design.radicand
        if design.source is DesignSource.SPHERE_POINTS and design.points is not None:
            data['points'] = [[encode_value(v) for v in p] for p in design.points]
            if design.squared_norm != 1:
                data['squared_norm'] = encode_value(design.squared_norm)
        else:
            data['gram'] = [[encode_value(v) for v in row] for row in design.gram]
        return data

    def dumps(self, design: DesignInstance) -> str:
        return json.dumps(self.to_dict(design), indent=self.indent, ensure_ascii=False) + "\n"

    def save(self, design: DesignInstance, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.dumps(design))
        logger.info(f"Saved {design.name or 'design'} to {path}")
        return path

    @staticmethod
    def _geometry(block) -> GeometryParams:
        if not isinstance(block, dict) or 'rank' not in block or 'degree' not in block:
            raise DesignFormatError("'geometry' must be an object with 'rank' and 'degree'")
        rank, degree = block['rank'], block['degree']
        if not isinstance(rank, int) or not isinstance(degree, int):
            raise DesignFormatError(f"Rank and degree must be integers, got {rank!r}, {degree!r}")
        return GeometryParams(rank, degree)

    @staticmethod
    def _entry(entry, radicand, where):
        try:
            return decode_value(entry, radicand)
        except (ValueError, ZeroDivisionError) as e:
            raise DesignFormatError(f"{where}: {e}") from e

    def _matrix(self, rows, radicand, key):
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise DesignFormatError(f"'{key}' must be a list of lists")
        return [
            [self._entry(v, radicand, f"{key}[{i}][{j}]") for j, v in enumerate(row)]
            for i, row in enumerate(rows)
        ]
