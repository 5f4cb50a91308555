"""
Configuration Loader
Loads and validates analysis configuration from YAML file
"""

import yaml
from pathlib import Path

REQUIRED_SECTIONS = ('scan', 'scheme', 'output', 'logging')
OUTPUT_FORMATS = ('json', 'text')


class ConfigLoader:
    """Load configuration from YAML file"""

    def __init__(self, config_path='config/analysis_config.yaml'):
        self.config_path = Path(config_path)
        self.config = None

    def load(self):
        """Load configuration from YAML file"""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {self.config_path}")

        with open(self.config_path, 'r', encoding='utf-8') as f:
            self.config = yaml.safe_load(f) or {}

        self._validate_config()

        return self.config

    def _validate_config(self):
        """Validate required sections and the values the runner relies on"""
        for section in REQUIRED_SECTIONS:
            if not isinstance(self.config.get(section), dict):
                raise ValueError(f"Missing required configuration section: {section}")

        fmt = self.config['output'].get('format', 'text')
        if fmt not in OUTPUT_FORMATS:
            raise ValueError(f"output.format must be 'json' or 'text', got {fmt!r}")

        scan = self.config['scan']
        degrees = scan.get('degrees', [])
        if not isinstance(degrees, list) or not all(isinstance(d, int) and d >= 1 for d in degrees):
            raise ValueError(f"scan.degrees must be a list of positive integers, got {degrees!r}")
        for key, minimum in (('max_rank', 2), ('max_s', 1)):
            value = scan.get(key, minimum)
            if not isinstance(value, int) or value < minimum:
                raise ValueError(f"scan.{key} must be an integer >= {minimum}, got {value!r}")

        limit = self.config['scheme'].get('dense_check_max_points', 0)
        if not isinstance(limit, int) or limit < 0:
            raise ValueError(f"scheme.dense_check_max_points must be a non-negative integer, got {limit!r}")

    def get(self, key, default=None):
        """Get configuration value by dotted key"""
        if self.config is None:
            self.load()

        value = self.config
        for k in key.split('.'):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def update(self, key, value):
        """Override a configuration value (used for command-line flags)"""
        if self.config is None:
            self.load()

        *parents, leaf = key.split('.')
        section = self.config
        for k in parents:
            section = section.setdefault(k, {})
        section[leaf] = value
