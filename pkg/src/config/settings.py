"""
Centralized configuration management with environment-specific settings
"""

import os
import json
from typing import Dict, Any, Optional
from dataclasses import dataclass, asdict

from dotenv import load_dotenv


@dataclass
class NumericsConfig:
    """Numerical tolerances and dimension guards"""
    tolerance: float = 1e-12
    exact_tolerance: float = 1e-14
    projector_tolerance: float = 1e-10
    max_spins: int = 20
    max_operator_spins: int = 10


@dataclass
class PerturbationConfig:
    """Perturbation scheme guards and defaults"""
    classicality_threshold: float = 1e-9
    epsilon_soft_limit: float = 0.5
    epsilon_hard_limit: float = 1.0
    test_mode: bool = False
    kappa_convention: str = "cycle"  # 'cycle', 'literal'
    sweep_workers: int = 1


@dataclass
class SamplingConfig:
    """Sinc reconstruction configuration"""
    taylor_cutoff: float = 1e-12
    default_window: int = 200


@dataclass
class OutputConfig:
    """Output configuration"""
    output_dir: Optional[str] = None
    default_format: str = "json"
    float_digits: int = 17
    include_timestamp: bool = True


@dataclass
class LoggingConfig:
    """Logging configuration"""
    level: str = "INFO"
    format: str = "text"


@dataclass
class AppConfig:
    """Main application configuration"""
    environment: str
    debug: bool
    numerics: NumericsConfig
    perturbation: PerturbationConfig
    sampling: SamplingConfig
    output: OutputConfig
    logging: LoggingConfig


def _env_bool(key: str, default: bool) -> bool:
    if key not in os.environ:
        return default
    return os.environ.get(key, '').lower() in ('true', '1', 'yes')


class Settings:
    """Settings manager with environment-specific configuration"""

    _instance: Optional['Settings'] = None
    _config: Optional[AppConfig] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self._config = self._load_config()

    def _load_config(self) -> AppConfig:
        """Load configuration based on environment"""
        load_dotenv(override=False)
        env = os.environ.get('ENVIRONMENT', 'development')

        sections = {
            'numerics': self._get_numerics_config(env),
            'perturbation': self._get_perturbation_config(env),
            'sampling': self._get_sampling_config(env),
            'output': self._get_output_config(env),
            'logging': self._get_logging_config(env),
        }

        # Environment-specific overrides, merged key by key
        config_file = f'config.{env}.json'
        if os.path.exists(config_file):
            with open(config_file, 'r') as f:
                overrides = json.load(f)
            self._merge_config(sections, overrides)

        return AppConfig(
            environment=env,
            debug=env != 'production',
            numerics=NumericsConfig(**sections['numerics']),
            perturbation=PerturbationConfig(**sections['perturbation']),
            sampling=SamplingConfig(**sections['sampling']),
            output=OutputConfig(**sections['output']),
            logging=LoggingConfig(**sections['logging']),
        )

    def _get_numerics_config(self, env: str) -> Dict[str, Any]:
        """Get numerical tolerances"""
        config = asdict(NumericsConfig())
        if 'COGWHEEL_TOLERANCE' in os.environ:
            config['tolerance'] = float(os.environ['COGWHEEL_TOLERANCE'])
        if 'COGWHEEL_MAX_OPERATOR_SPINS' in os.environ:
            config['max_operator_spins'] = int(os.environ['COGWHEEL_MAX_OPERATOR_SPINS'])
        return config

    def _get_perturbation_config(self, env: str) -> Dict[str, Any]:
        """Get perturbation guards based on environment"""
        config = asdict(PerturbationConfig())
        config['test_mode'] = _env_bool('COGWHEEL_TEST_MODE', env == 'test')
        if 'COGWHEEL_CLASSICALITY_THRESHOLD' in os.environ:
            config['classicality_threshold'] = float(os.environ['COGWHEEL_CLASSICALITY_THRESHOLD'])
        if 'COGWHEEL_KAPPA_CONVENTION' in os.environ:
            config['kappa_convention'] = os.environ['COGWHEEL_KAPPA_CONVENTION']
        if 'COGWHEEL_SWEEP_WORKERS' in os.environ:
            config['sweep_workers'] = int(os.environ['COGWHEEL_SWEEP_WORKERS'])
        return config

    def _get_sampling_config(self, env: str) -> Dict[str, Any]:
        """Get sampling configuration"""
        return asdict(SamplingConfig())

    def _get_output_config(self, env: str) -> Dict[str, Any]:
        """Get output configuration"""
        return {
            'output_dir': os.environ.get('COGWHEEL_OUTPUT_DIR') or None,
            'default_format': os.environ.get('COGWHEEL_FORMAT', 'json'),
            'float_digits': 17,
            'include_timestamp': _env_bool('COGWHEEL_TIMESTAMP', True),
        }

    def _get_logging_config(self, env: str) -> Dict[str, Any]:
        """Get logging configuration based on environment"""
        if env == 'production':
            defaults = {'level': 'WARNING', 'format': 'json'}
        elif env == 'test':
            defaults = {'level': 'WARNING', 'format': 'text'}
        else:  # development
            defaults = {'level': 'INFO', 'format': 'text'}

        return {
            'level': os.environ.get('LOG_LEVEL', defaults['level']).upper(),
            'format': os.environ.get('LOG_FORMAT', defaults['format']).lower(),
        }

    def _merge_config(self, base: dict, overrides: dict):
        """Recursively merge configuration dictionaries"""
        for key, value in overrides.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._merge_config(base[key], value)
            else:
                base[key] = value

    @property
    def config(self) -> AppConfig:
        """Get the current configuration"""
        if self._config is None:
            self._config = self._load_config()
        return self._config

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value by dot-notation key"""
        keys = key.split('.')
        value = self.config

        for k in keys:
            if hasattr(value, k):
                value = getattr(value, k)
            elif isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def reload(self):
        """Drop the cached configuration; the next access re-reads the environment"""
        self._config = None


# Singleton instance
settings = Settings()
