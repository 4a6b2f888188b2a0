"""
Run configuration: YAML/JSON defaults, validation and CLI overrides
"""
import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from ..errors import InvalidParameterError

logger = logging.getLogger('planar_gap.config')

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent.parent / 'config' / 'config.yml'


@dataclass
class RunConfig:
    """Everything a command needs to reproduce its output"""
    command: str = ''
    h: Optional[int] = None
    k: Optional[int] = None
    h_min: Optional[int] = None
    h_max: Optional[int] = None
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    format: str = 'edgelist'
    solver: str = 'auto'
    tolerance: float = 1e-8
    max_iter: int = 5000
    dense_cutoff: int = 2000
    trials: int = 1000
    seed: int = 7
    rel_tol: float = 1e-9
    eps: float = 0.25
    method: str = 'auto'
    start_policy: str = 'extremes'
    walkers: int = 100_000
    random_starts: int = 8
    t_max: Optional[int] = None
    mixing_exact_max_vertices: int = 2000
    cheeger_exact_max_vertices: int = 24
    distance_mode: str = 'exact'
    sample_pairs: int = 2000
    distances_exact_max_vertices: int = 50_000
    max_vertices: int = 5_000_000
    workers: int = 1

    def resolved_k(self, h: Optional[int] = None) -> int:
        """k defaults to 2^h"""
        h = self.h if h is None else h
        if self.k is not None:
            return self.k
        if h is None:
            raise InvalidParameterError("k cannot default without h")
        return 2 ** h

    def solver_options(self, with_seed: bool = True) -> Dict[str, Any]:
        options = {'solver': self.solver, 'tolerance': self.tolerance, 'max_iter': self.max_iter,
                   'dense_cutoff': self.dense_cutoff}
        if with_seed:
            options['seed'] = self.seed
        return options

    def validate(self) -> 'RunConfig':
        """Strict checks on merged values; raises InvalidParameterError"""
        for name in ('h', 'h_min', 'h_max'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise InvalidParameterError(f"{name} must be >= 1, got {value}")
        if self.k is not None and self.k < 1:
            raise InvalidParameterError(f"k must be >= 1, got {self.k}")
        if self.h_min is not None and self.h_max is not None and self.h_min > self.h_max:
            raise InvalidParameterError(f"h_min={self.h_min} exceeds h_max={self.h_max}")
        if not 0 < self.eps < 1:
            raise InvalidParameterError(f"eps must lie in (0, 1), got {self.eps}")
        if self.tolerance <= 0:
            raise InvalidParameterError(f"tolerance must be positive, got {self.tolerance}")
        if self.trials < 1:
            raise InvalidParameterError(f"trials must be positive, got {self.trials}")
        if self.solver not in ('auto', 'dense', 'iterative'):
            raise InvalidParameterError(f"unknown solver {self.solver!r}")
        if self.method not in ('auto', 'exact', 'monte_carlo'):
            raise InvalidParameterError(f"unknown method {self.method!r}")
        if self.t_max is not None and self.t_max < 0:
            raise InvalidParameterError(f"t_max must be nonnegative, got {self.t_max}")
        if self.seed < 0:
            raise InvalidParameterError(f"seed must be nonnegative, got {self.seed}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Read a YAML or JSON config file.

    Priority: explicit path > config/config.yml. An explicit path that does
    not exist raises FileNotFoundError; a missing default yields {}.
    """
    if path:
        p = Path(path)
        if not p.exists():
            raise FileNotFoundError(f"config file not found: {p}")
    else:
        p = DEFAULT_CONFIG_PATH
        if not p.exists():
            return {}

    with open(p, 'r') as f:
        if p.suffix.lower() in ('.yml', '.yaml'):
            cfg = yaml.safe_load(f) or {}
        else:
            cfg = json.load(f)
    if not isinstance(cfg, dict):
        logger.warning(f"Ignoring config {p}: top level is not a mapping")
        return {}
    logger.debug(f"Loaded config from {p}")
    return cfg


def _clamp(value: Any, low: float, high: float, default: float, name: str, cast=float):
    try:
        number = cast(value)
    except (TypeError, ValueError):
        logger.warning(f"Config {name}={value!r} is not a number; using {default}")
        return default
    clamped = max(low, min(high, number))
    if clamped != number:
        logger.warning(f"Config {name}={number} clamped to {clamped}")
    return cast(clamped)


def validate_config(cfg: Dict[str, Any]) -> Dict[str, Any]:
    """
    Flatten the sectioned config into RunConfig field names, clamping values
    into their valid ranges
    """
    defaults = RunConfig()
    solver = cfg.get('solver') or {}
    cheeger = cfg.get('cheeger') or {}
    distances = cfg.get('distances') or {}
    mixing = cfg.get('mixing') or {}
    verify = cfg.get('verify') or {}
    graphs = cfg.get('graphs') or {}
    validated: Dict[str, Any] = {}

    validated['tolerance'] = _clamp(solver.get('tolerance', defaults.tolerance), 1e-15, 1e-2,
                                    defaults.tolerance, 'solver.tolerance')
    validated['max_iter'] = _clamp(solver.get('max_iter', defaults.max_iter), 1, 10 ** 7,
                                   defaults.max_iter, 'solver.max_iter', int)
    validated['dense_cutoff'] = _clamp(solver.get('dense_cutoff', defaults.dense_cutoff), 2, 20_000,
                                       defaults.dense_cutoff, 'solver.dense_cutoff', int)
    name = str(solver.get('method', defaults.solver)).lower()
    validated['solver'] = name if name in ('auto', 'dense', 'iterative') else defaults.solver

    # enumeration is 2^n; beyond 30 vertices it is hopeless anyway
    validated['cheeger_exact_max_vertices'] = _clamp(
        cheeger.get('exact_max_vertices', defaults.cheeger_exact_max_vertices), 2, 30,
        defaults.cheeger_exact_max_vertices, 'cheeger.exact_max_vertices', int)

    validated['distances_exact_max_vertices'] = _clamp(
        distances.get('exact_max_vertices', defaults.distances_exact_max_vertices), 2, 10 ** 6,
        defaults.distances_exact_max_vertices, 'distances.exact_max_vertices', int)
    validated['sample_pairs'] = _clamp(distances.get('sample_pairs', defaults.sample_pairs), 2, 10 ** 8,
                                       defaults.sample_pairs, 'distances.sample_pairs', int)
    mode = str(distances.get('mode', defaults.distance_mode)).lower()
    validated['distance_mode'] = mode if mode in ('exact', 'sampled') else defaults.distance_mode

    validated['eps'] = _clamp(mixing.get('eps', defaults.eps), 1e-6, 0.999, defaults.eps, 'mixing.eps')
    validated['mixing_exact_max_vertices'] = _clamp(
        mixing.get('exact_max_vertices', defaults.mixing_exact_max_vertices), 2, 100_000,
        defaults.mixing_exact_max_vertices, 'mixing.exact_max_vertices', int)
    validated['walkers'] = _clamp(mixing.get('walkers', defaults.walkers), 1, 10 ** 8,
                                  defaults.walkers, 'mixing.walkers', int)
    validated['random_starts'] = _clamp(mixing.get('random_starts', defaults.random_starts), 0, 1000,
                                        defaults.random_starts, 'mixing.random_starts', int)
    if mixing.get('t_max') is not None:
        validated['t_max'] = _clamp(mixing['t_max'], 0, 10 ** 9, defaults.t_max, 'mixing.t_max', int)
    policy = str(mixing.get('start_policy', defaults.start_policy))
    validated['start_policy'] = policy if policy in ('extremes', 'root', 'worst_sampled') \
        else defaults.start_policy

    validated['trials'] = _clamp(verify.get('trials', defaults.trials), 1, 10 ** 7,
                                 defaults.trials, 'verify.trials', int)
    validated['seed'] = _clamp(verify.get('seed', defaults.seed), 0, 2 ** 63 - 1,
                               defaults.seed, 'verify.seed', int)
    validated['rel_tol'] = _clamp(verify.get('rel_tol', defaults.rel_tol), 0.0, 1e-3,
                                  defaults.rel_tol, 'verify.rel_tol')
    validated['workers'] = _clamp(verify.get('workers', defaults.workers), 1, 256,
                                  defaults.workers, 'verify.workers', int)

    validated['max_vertices'] = _clamp(graphs.get('max_vertices', defaults.max_vertices), 1, 10 ** 9,
                                       defaults.max_vertices, 'graphs.max_vertices', int)
    return validated


def build_run_config(command: str, overrides: Optional[Dict[str, Any]] = None,
                     config_path: Optional[str] = None) -> RunConfig:
    """Defaults < config file < non-None CLI overrides"""
    values = validate_config(load_config(config_path))
    known = {f.name for f in fields(RunConfig)}
    for key, value in (overrides or {}).items():
        if key in known and value is not None:
            values[key] = value
    values['command'] = command
    return RunConfig(**{k: v for k, v in values.items() if k in known}).validate()
