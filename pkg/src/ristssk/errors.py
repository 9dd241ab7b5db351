class InvalidParameterError(ValueError):
    """Raised when a scheme parameter violates its documented constraint."""


class DimensionError(ValueError):
    """Raised when array shapes do not agree."""


def is_power_of_two(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0 and (value & (value - 1)) == 0


def require_power_of_two(name: str, value) -> int:
    if not is_power_of_two(value):
        raise InvalidParameterError(f"{name}={value!r} must be a power of two (1, 2, 4, ...)")
    return value
