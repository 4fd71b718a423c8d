"""
Input validation system with schema validation and error types
"""

import re
from functools import wraps
from typing import Any, Dict, List, Optional, Tuple


class ValidationError(Exception):
    """Custom exception for validation errors"""
    def __init__(self, message: str, field: str = None):
        self.message = message
        self.field = field
        super().__init__(self.message)


class DimensionError(ValidationError):
    """Spin count or dimension outside the supported range"""


class ShapeError(ValidationError):
    """Mismatched lengths or dimensions"""


class SpinIndexError(ValidationError):
    """Invalid spin indices for a transposition"""


class DegenerateInputError(ValidationError):
    """Empty ranges, zero vectors and similar inputs with nothing to compute"""


class ContractViolationError(ValidationError):
    """Input violates a structural precondition (e.g. a non-Hermitian generator)"""


class UsageError(ValidationError):
    """Command-line argument that cannot be parsed"""
    def __init__(self, message: str, field: str = None, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message, field)


_GENERATOR = re.compile(r'P(\d)(\d)$|P(\d+)_(\d+)$|Id$')
_SPIN_CHARS = {'u': 'u', 'd': 'd', '↑': 'u', '↓': 'd'}


class Validator:
    """Parsers for command-line values; positions are 1-based character offsets"""

    @staticmethod
    def _tokens(text: str) -> List[Tuple[int, str]]:
        """Split on commas, keeping the 1-based start position of every token"""
        tokens = []
        position = 1
        for raw in text.split(','):
            stripped = raw.strip()
            offset = len(raw) - len(raw.lstrip())
            tokens.append((position + offset, stripped))
            position += len(raw) + 1
        return tokens

    @staticmethod
    def parse_config(text: str, field: str = 'config') -> str:
        """Normalize a spin configuration string to u/d characters"""
        if not isinstance(text, str) or not text.strip():
            raise UsageError("Empty spin configuration", field, position=1)
        normalized = []
        for k, char in enumerate(text.strip().lower(), start=1):
            if char not in _SPIN_CHARS:
                raise UsageError(
                    f"Invalid spin '{char}' in '{text}': expected u or d", field, position=k
                )
            normalized.append(_SPIN_CHARS[char])
        return ''.join(normalized)

    @staticmethod
    def parse_config_list(text: str, field: str = 'configs') -> List[str]:
        """Comma-separated spin configurations; all must share one length"""
        configs = []
        for position, token in Validator._tokens(text):
            try:
                configs.append(Validator.parse_config(token, field))
            except UsageError as e:
                inner = (e.position or 1) - 1
                raise UsageError(
                    f"Invalid spin configuration '{token}'", field, position=position + inner
                ) from e
        if len({len(c) for c in configs}) > 1:
            raise UsageError(f"Spin configurations differ in length: {configs}", field)
        return configs

    @staticmethod
    def parse_generators(text: str, field: str = 'gens') -> List[Optional[Tuple[int, int]]]:
        """
        Parse a product of transpositions written left to right, e.g. "P12,P23"

        Each entry is (i, j) with i < j, or None for "Id". Multi-digit indices
        use an underscore: "P3_11".
        """
        if not isinstance(text, str) or not text.strip():
            raise UsageError("Empty generator list", field, position=1)

        generators: List[Optional[Tuple[int, int]]] = []
        for position, token in Validator._tokens(text):
            match = _GENERATOR.match(token)
            if not match:
                raise UsageError(
                    f"Invalid generator '{token}': expected P<i><j>, P<i>_<j> or Id",
                    field,
                    position=position,
                )
            if token == 'Id':
                generators.append(None)
                continue
            digits = [g for g in match.groups() if g is not None]
            i, j = int(digits[0]), int(digits[1])
            if i == j:
                raise UsageError(f"Generator '{token}' swaps a spin with itself", field, position)
            generators.append((min(i, j), max(i, j)))
        return generators

    @staticmethod
    def parse_float_list(text: str, field: str = 'values') -> List[float]:
        """Comma-separated real numbers"""
        values = []
        for position, token in Validator._tokens(str(text)):
            try:
                values.append(float(token))
            except ValueError:
                raise UsageError(f"Invalid number '{token}'", field, position=position)
        return values

    @staticmethod
    def parse_complex_list(text: str, field: str = 'values') -> List[complex]:
        """Comma-separated complex numbers such as 0.1, 0.2+0.1j or 0.3-0.2i"""
        values = []
        for position, token in Validator._tokens(str(text)):
            try:
                values.append(complex(token.replace(' ', '').replace('i', 'j')))
            except ValueError:
                raise UsageError(f"Invalid complex number '{token}'", field, position=position)
        return values


class SchemaValidator:
    """Schema-based validation for command parameters"""

    def __init__(self, schema: Dict[str, Any]):
        self.schema = schema

    def validate(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Validate data against schema"""
        validated = {}
        errors = []

        unknown = set(data) - set(self.schema)
        if unknown:
            raise UsageError(f"Unknown parameters: {sorted(unknown)}")

        for field_name, field_config in self.schema.items():
            field_type = field_config.get('type', 'string')
            required = field_config.get('required', False)
            default = field_config.get('default', None)
            min_val = field_config.get('min', None)
            max_val = field_config.get('max', None)
            exclusive_min = field_config.get('exclusive_min', None)
            choices = field_config.get('choices', None)

            if field_name not in data or data[field_name] is None:
                if required:
                    errors.append(f"Missing required parameter: {field_name}")
                elif default is not None:
                    validated[field_name] = default
                continue

            value = data[field_name]

            try:
                if field_type == 'string':
                    value = str(value).strip()

                elif field_type == 'integer':
                    value = int(value)

                elif field_type == 'float':
                    value = float(value)

                elif field_type == 'boolean':
                    if isinstance(value, str):
                        value = value.lower() in ('true', '1', 'yes')
                    else:
                        value = bool(value)

                elif field_type == 'float_list':
                    value = value if isinstance(value, list) else Validator.parse_float_list(value, field_name)
                    if not value:
                        raise ValidationError(f"{field_name} must not be empty")

                elif field_type == 'complex_list':
                    value = value if isinstance(value, list) else Validator.parse_complex_list(value, field_name)

                elif field_type == 'config':
                    value = Validator.parse_config(value, field_name)

                elif field_type == 'config_list':
                    value = value if isinstance(value, list) else Validator.parse_config_list(value, field_name)

                elif field_type == 'generators':
                    value = value if isinstance(value, list) else Validator.parse_generators(value, field_name)

                # Range validation
                if isinstance(value, (int, float)) and not isinstance(value, bool):
                    if min_val is not None and value < min_val:
                        raise ValidationError(f"{field_name} must be >= {min_val}")
                    if max_val is not None and value > max_val:
                        raise ValidationError(f"{field_name} must be <= {max_val}")
                    if exclusive_min is not None and value <= exclusive_min:
                        raise ValidationError(f"{field_name} must be > {exclusive_min}")

                # Choices validation
                if choices and value not in choices:
                    raise ValidationError(f"{field_name} must be one of: {', '.join(choices)}")

                validated[field_name] = value

            except ValidationError as e:
                errors.append(e.message)
            except (ValueError, TypeError) as e:
                errors.append(f"Invalid {field_type} for {field_name}: {str(e)}")

        if errors:
            raise UsageError("; ".join(errors))

        return validated


SCHEME_NAMES = ['operator', 'hamiltonian', 'exact-operator', 'exact-hamiltonian', 'diagonal']
SIGNAL_NAMES = ['cos', 'sin', 'cexp', 'sinc', 'const']
CONVENTIONS = ['cycle', 'literal']

_PERTURBATION_FIELDS = {
    'scheme': {'type': 'string', 'required': True, 'choices': SCHEME_NAMES},
    'T': {'type': 'float', 'default': 1.0, 'exclusive_min': 0},
    'threshold': {'type': 'float', 'exclusive_min': 0, 'max': 1},
    'test_mode': {'type': 'boolean', 'default': False},
    'convention': {'type': 'string', 'choices': CONVENTIONS},
}

# Pre-defined schemas, one per command
SCHEMAS = {
    'ops': {
        'n': {'type': 'integer', 'default': 3, 'min': 1, 'max': 10},
        'gens': {'type': 'generators', 'default': [(1, 2), (2, 3)]},
        'tol': {'type': 'float', 'default': 1e-12, 'exclusive_min': 0},
    },

    'spectrum': {
        'target': {'type': 'string', 'default': 'chain', 'choices': ['chain', 'cogwheel']},
        'N': {'type': 'integer', 'default': 3, 'min': 1, 'max': 256},
        'T': {'type': 'float', 'default': 1.0, 'exclusive_min': 0},
        'tol': {'type': 'float', 'default': 1e-12, 'exclusive_min': 0},
        'convention': {'type': 'string', 'choices': CONVENTIONS},
    },

    'bch': {
        'tol': {'type': 'float', 'default': 1e-10, 'exclusive_min': 0},
        'convention': {'type': 'string', 'choices': CONVENTIONS},
    },

    'perturb': {
        **_PERTURBATION_FIELDS,
        'eps': {'type': 'float', 'default': 0.0},
        'c': {'type': 'complex_list'},
        'input': {'type': 'config', 'required': True},
    },

    'sweep': {
        **_PERTURBATION_FIELDS,
        'eps': {'type': 'float_list'},
        'c': {'type': 'complex_list'},
        'inputs': {'type': 'config_list', 'required': True},
        'workers': {'type': 'integer', 'min': 1, 'max': 64},
    },

    'sample': {
        'omega_max': {'type': 'float', 'default': 2.0, 'exclusive_min': 0},
        'n_min': {'type': 'integer'},
        'n_max': {'type': 'integer'},
        'signal': {'type': 'string', 'default': 'cos', 'choices': SIGNAL_NAMES},
        'freq': {'type': 'float', 'default': 1.0},
        'points': {'type': 'integer', 'default': 0, 'min': 0, 'max': 100000},
        't_min': {'type': 'float', 'default': -10.0},
        't_max': {'type': 'float', 'default': 10.0},
    },

    'verify-all': {},
}


def validate_params(schema_name: str = None, schema: Dict = None):
    """
    Decorator to validate run parameters against a schema

    Usage:
        @validate_params('bch')
        def run(run_config):
            # run_config.params is already validated
    """
    def decorator(func):
        @wraps(func)
        def wrapper(run_config, *args, **kwargs):
            if schema is not None:
                validation_schema = schema
            elif schema_name and schema_name in SCHEMAS:
                validation_schema = SCHEMAS[schema_name]
            else:
                # No validation
                return func(run_config, *args, **kwargs)

            validated = SchemaValidator(validation_schema).validate(dict(run_config.params))
            run_config = run_config.model_copy(update={'params': validated})
            return func(run_config, *args, **kwargs)
        return wrapper
    return decorator
