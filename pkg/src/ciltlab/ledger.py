import hashlib
import json
import sqlite3
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, Optional


def canonical_json(payload: Any) -> str:
    """JSON with sorted keys and no whitespace; floats keep their repr."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def digest(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


class Ledger:
    """A minimal sqlite-backed record of ciltlab runs.

    Tables created: runs.

    Each run row holds the subcommand, its canonical parameters, the seed, the
    digest of the canonical result and an ISO-8601 timestamp.
    """

    SCHEMA = {
        "runs": (
            "id INTEGER PRIMARY KEY AUTOINCREMENT",
            "subcommand TEXT",
            "params TEXT",
            "seed INTEGER",
            "digest TEXT",
            "timestamp TEXT",
        ),
    }

    def __init__(self, db_path: str = ":memory:") -> None:
        """Open (or create) the sqlite database and ensure schema exists.

        Args:
            db_path: path to sqlite file or ":memory:" for ephemeral DB.
        """
        self.db_path = db_path
        self.conn = sqlite3.connect(self.db_path)
        self.conn.row_factory = sqlite3.Row
        self._ensure_schema()

    def _ensure_schema(self) -> None:
        cur = self.conn.cursor()
        for table, columns in self.SCHEMA.items():
            cols = ", ".join(columns)
            cur.execute(f"CREATE TABLE IF NOT EXISTS {table} ({cols})")
        self.conn.commit()

    def close(self) -> None:
        """Close the underlying connection."""
        try:
            self.conn.close()
        except Exception:
            pass

    def __enter__(self) -> "Ledger":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def store_run(
        self,
        subcommand: str,
        params: Dict[str, Any],
        seed: int,
        result_digest: str,
        timestamp: Optional[str] = None,
    ) -> int:
        """Append a run and return its row id.

        Args:
            subcommand: CLI subcommand name
            params: parameters of the run, stored as canonical JSON
            seed: master seed
            result_digest: digest of the canonical result
            timestamp: ISO timestamp or None to use current UTC time
        """
        ts = timestamp or datetime.now(timezone.utc).isoformat()
        cur = self.conn.cursor()
        cur.execute(
            "INSERT INTO runs (subcommand, params, seed, digest, timestamp) VALUES (?, ?, ?, ?, ?)",
            (subcommand, canonical_json(params), seed, result_digest, ts),
        )
        self.conn.commit()
        return int(cur.lastrowid)

    def get_runs(self, subcommand: Optional[str] = None) -> Iterable[Dict[str, Any]]:
        cur = self.conn.cursor()
        if subcommand is None:
            cur.execute("SELECT id, subcommand, params, seed, digest, timestamp FROM runs ORDER BY id")
        else:
            cur.execute(
                "SELECT id, subcommand, params, seed, digest, timestamp FROM runs WHERE subcommand = ? ORDER BY id",
                (subcommand,),
            )
        for row in cur.fetchall():
            yield dict(row)

    def last_digest(self, subcommand: str, params: Dict[str, Any]) -> Optional[str]:
        """Digest of the most recent run with exactly these parameters, if any."""
        cur = self.conn.cursor()
        cur.execute(
            "SELECT digest FROM runs WHERE subcommand = ? AND params = ? ORDER BY id DESC LIMIT 1",
            (subcommand, canonical_json(params)),
        )
        row = cur.fetchone()
        return None if row is None else row["digest"]
