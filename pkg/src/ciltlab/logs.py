from phdkit.log import Logger, LogOutput, LogLevel, LogOutputKind

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_logger: Logger | None = None
_level: str = "INFO"


def parse_level(name: str) -> LogLevel:
    """Map a level name from the configuration onto a phdkit level.

    Raises:
        ValueError: if ``name`` is not a known level.
    """
    match name.upper():
        case "INFO":
            return LogLevel.INFO
        case "DEBUG":
            return LogLevel.DEBUG
        case "WARNING":
            return LogLevel.WARNING
        case "ERROR":
            return LogLevel.ERROR
        case "CRITICAL":
            return LogLevel.CRITICAL
        case _:
            raise ValueError(f"Invalid log level: {name} (expected one of {', '.join(_LEVELS)})")


def set_level(name: str) -> None:
    """Rebuild the shared logger at the given level."""
    global _logger, _level
    level = parse_level(name)
    _level = name.upper()
    output = LogOutput("ciltlab.default", kind=LogOutputKind.CONSOLE, level=level)
    _logger = Logger("ciltlab", outputs=[output])


def get_logger() -> Logger:
    if _logger is None:
        set_level(_level)
    assert _logger is not None
    return _logger


def current_level() -> str:
    return _level
