from pathlib import Path

from phdkit.configlib import TomlReader, configurable, setting
from phdkit.log import Logger
from xdg_base_dirs import xdg_config_home, xdg_data_home

from . import logs
from .ledger import Ledger

DEFAULT_CONFIG_FILE = str(Path(xdg_config_home()) / "ciltlab" / "config.toml")
DEFAULT_ENV_FILE = str(Path(xdg_config_home()) / "ciltlab" / "env.toml")
DEFAULT_STORE_FILE = str(Path(xdg_data_home()) / "ciltlab" / "runs.db")


@configurable(TomlReader(DEFAULT_CONFIG_FILE), load_env=TomlReader(DEFAULT_ENV_FILE))
class App:
    def __init__(self) -> None:
        self._ledger: Ledger | None = None

    @setting("log.level", default="INFO")
    def log_level(self) -> str: ...

    @setting("run.seed", default=0)
    def seed(self) -> int: ...

    @setting("run.n_samples", default=100_000)
    def n_samples(self) -> int: ...

    @setting("run.threads", default=0)
    def threads(self) -> int: ...

    @setting("run.chunk_size", default=4096)
    def chunk_size(self) -> int: ...

    @setting("store.db_file", default=DEFAULT_STORE_FILE)
    def store_db_file(self) -> str: ...

    @setting("store.enabled", default=False)
    def store_enabled(self) -> bool: ...

    @property
    def logger(self) -> Logger:
        if logs.current_level() != str(self.log_level).upper():
            logs.set_level(self.log_level)
        return logs.get_logger()

    @property
    def worker_cap(self) -> int | None:
        """``run.threads`` with 0 meaning CILTLAB_THREADS or the CPU count."""
        threads = int(self.threads)
        return threads if threads > 0 else None

    @property
    def ledger(self) -> Ledger:
        if self._ledger is None:
            path = str(self.store_db_file)
            if path != ":memory:":
                Path(path).parent.mkdir(parents=True, exist_ok=True)
            self._ledger = Ledger(path)
        return self._ledger

    def close(self) -> None:
        if self._ledger is not None:
            self._ledger.close()
            self._ledger = None
