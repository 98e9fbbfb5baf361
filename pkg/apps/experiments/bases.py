"""
Base class for the experiment commands.

Handles what every run shares: resolving the run config (settings defaults,
then a key=value file, then flags), the output directory, `run_config.txt`,
the JSON-lines run log, thread caps, and turning lab errors into exit codes.
"""
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Mapping

from decouple import RepositoryEnv
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from WnllLab import VERSION_STRING
from custom_tools.exceptions import WnllLabError
from custom_tools.logger import configure_from_settings, custom_logger, log_to_jsonl, record_event

from .exceptions import RunConfigError

ACCEPTANCE_FAILURE = 1


def read_config_file(path) -> Dict[str, str]:
    """key=value pairs of a run config file (comments and blank lines ignored)."""
    path = Path(path)
    if not path.exists():
        raise RunConfigError(f"{path}: config file not found")
    return dict(RepositoryEnv(str(path)).data)


def resolve_config(defaults: Mapping[str, str], config_path=None, flags: Mapping[str, object] = None) -> Dict[str, str]:
    """Merge defaults < config file < flags (flags left as None do not override)."""
    resolved = {key: str(value) for key, value in defaults.items()}
    if config_path:
        for key, value in read_config_file(config_path).items():
            if key not in resolved:
                raise RunConfigError(f"{config_path}: unknown key '{key}'")
            resolved[key] = value
    for key, value in (flags or {}).items():
        if value is not None:
            resolved[key] = str(value)
    return resolved


@contextmanager
def worker_cap(n_jobs: int):
    """Set WNLL_N_JOBS for the duration of a run and restore it afterwards."""
    previous = settings.WNLL_N_JOBS
    settings.WNLL_N_JOBS = n_jobs
    try:
        yield n_jobs
    finally:
        settings.WNLL_N_JOBS = previous


def write_run_config(directory: Path, command: str, resolved: Mapping[str, str]) -> Path:
    lines = [f"command={command}"] + [f"{key}={resolved[key]}" for key in sorted(resolved)]
    lines.append(f"version={VERSION_STRING}")
    path = directory / "run_config.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class ExperimentCommand(BaseCommand):
    """
    Subclasses implement `add_experiment_arguments` and `run(options, out_dir)`.
    `run` returns a short summary line; `fail_acceptance` exits with code 1.
    """
    command_name = "experiment"

    def add_arguments(self, parser):
        parser.add_argument('--out', help='Output directory (default: <WNLL_OUTPUT_ROOT>/<command>)')
        parser.add_argument('--seed', type=int, default=0, help='Run seed; every random stream derives from it')
        parser.add_argument('--threads', type=int, help='Cap on parallel workers (default: WNLL_N_JOBS)')
        self.add_experiment_arguments(parser)

    def add_experiment_arguments(self, parser):
        pass

    def output_dir(self, options) -> Path:
        out = Path(options.get('out') or Path(settings.WNLL_OUTPUT_ROOT) / self.command_name)
        out.mkdir(parents=True, exist_ok=True)
        return out

    def threads(self, options) -> int:
        return options['threads'] if options.get('threads') else settings.WNLL_N_JOBS

    def handle(self, *args, **options):
        configure_from_settings()
        try:
            out_dir = self.output_dir(options)
            log_path = out_dir / "run_log.jsonl"
            log_path.unlink(missing_ok=True)
            with log_to_jsonl(log_path), worker_cap(self.threads(options)):
                record_event("run_start", command=self.command_name, version=VERSION_STRING,
                             seed=options['seed'], threads=self.threads(options))
                summary = self.run(options, out_dir)
                record_event("run_end", command=self.command_name)
        except WnllLabError as exc:
            custom_logger(str(exc), "ERROR")
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        if summary:
            self.stdout.write(self.style.SUCCESS(summary))

    def run(self, options, out_dir: Path) -> str:
        raise NotImplementedError

    def fail_acceptance(self, message: str):
        record_event("acceptance_failure", command=self.command_name, message=message)
        raise CommandError(message, returncode=ACCEPTANCE_FAILURE)
