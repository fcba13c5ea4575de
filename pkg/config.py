from dotenv import load_dotenv
load_dotenv()

import os
from dataclasses import dataclass, field, fields
from typing import Any, Dict, Optional, Tuple

import yaml


def _seeds_from_env(raw: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in raw.split(',') if part.strip())


@dataclass
class Config:
    # Ordinal arithmetic
    ORDINAL_BOUND: str = os.getenv('ORDINAL_BOUND', 'w^w')

    # Realiser interpretation
    DEFAULT_FUEL: int = int(os.getenv('DEFAULT_FUEL', '200000'))
    POOL_WIDTH: int = int(os.getenv('POOL_WIDTH', '2'))
    OMEGA_PROBE: int = int(os.getenv('OMEGA_PROBE', '4'))
    MAX_FUEL_RETRIES: int = int(os.getenv('MAX_FUEL_RETRIES', '2'))

    # Universes
    UNIVERSE_RANK: int = int(os.getenv('UNIVERSE_RANK', '2'))
    TRUTH_UNIVERSE_RANK: int = int(os.getenv('TRUTH_UNIVERSE_RANK', '4'))
    WITNESS_RANK: int = int(os.getenv('WITNESS_RANK', '3'))
    SCRAMBLE_SEEDS: Tuple[int, ...] = field(
        default_factory=lambda: _seeds_from_env(os.getenv('SCRAMBLE_SEEDS', '0,1')))

    # Machine simulation
    OTM_BLOCK_STEPS: int = int(os.getenv('OTM_BLOCK_STEPS', '256'))

    # Glued realisability
    ORACLE_FILE: str = os.getenv('ORACLE_FILE', 'specs/oracle.db')
    ORACLE_ROUNDS: int = int(os.getenv('ORACLE_ROUNDS', '3'))

    # File paths
    OUTPUT_DIR: str = os.getenv('OUTPUT_DIR', 'output')
    LOG_FILE: str = os.getenv('LOG_FILE', 'realizability.log')
    STABLE_REPORTS: bool = os.getenv('STABLE_REPORTS', 'true').lower() == 'true'

    def __post_init__(self):
        if self.DEFAULT_FUEL <= 0:
            raise ValueError("DEFAULT_FUEL must be positive")
        if self.UNIVERSE_RANK < 0 or self.TRUTH_UNIVERSE_RANK < 0 or self.WITNESS_RANK < 0:
            raise ValueError("universe ranks must be non-negative")
        if self.UNIVERSE_RANK > 4 or self.TRUTH_UNIVERSE_RANK > 5:
            raise ValueError("universe ranks above V_4 / V_5 are not desk scale")
        if self.POOL_WIDTH < 1 or self.OMEGA_PROBE < 1:
            raise ValueError("POOL_WIDTH and OMEGA_PROBE must be at least 1")
        if isinstance(self.SCRAMBLE_SEEDS, str):
            self.SCRAMBLE_SEEDS = _seeds_from_env(self.SCRAMBLE_SEEDS)
        else:
            self.SCRAMBLE_SEEDS = tuple(int(seed) for seed in self.SCRAMBLE_SEEDS)

        # Create output directory if it doesn't exist
        os.makedirs(self.OUTPUT_DIR, exist_ok=True)

    @classmethod
    def from_yaml(cls, path: str, base: Optional['Config'] = None) -> 'Config':
        """Layer a YAML config file over the environment-derived defaults."""
        with open(path, 'r') as f:
            overrides = yaml.safe_load(f) or {}
        return cls.with_overrides(overrides, base)

    @classmethod
    def with_overrides(cls, overrides: Dict[str, Any], base: Optional['Config'] = None) -> 'Config':
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"Unknown configuration keys: {sorted(unknown)}")
        base = base or cls()
        values = {name: getattr(base, name) for name in known}
        values.update(overrides)
        return cls(**values)

    def apply(self, overrides: Dict[str, Any]) -> None:
        """Override fields of this instance in place, validating the result."""
        updated = self.with_overrides(overrides, self)
        for f in fields(self):
            setattr(self, f.name, getattr(updated, f.name))

    def ordinal_bound(self):
        from ordinal import parse_ordinal
        return parse_ordinal(self.ORDINAL_BOUND, bounded=False)


# Global config instance
config = Config()
