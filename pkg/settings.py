import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


@dataclass
class RuntimeSettings:
    """Process-wide knobs read from the environment (or a .env file)."""

    threads: int = 1

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        raw = os.getenv("DIRAC1D_THREADS", "1")
        try:
            threads = max(1, int(raw))
        except ValueError:
            threads = 1
        return cls(threads=threads)

    def set_threads(self, threads: int):
        self.threads = max(1, int(threads))


runtime_settings = RuntimeSettings.from_env()
