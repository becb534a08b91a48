"""Scenario suites: the canonical experiment set, batch runs and the suite report."""

import logging
from pathlib import Path

from app.core import settings
from app.core.exceptions import ExportError, SimulationFault
from app.models import (
    ModelKind,
    RunManifest,
    ScenarioConfig,
    ScenarioKind,
    SuiteEntry,
    SuiteEntryResult,
    SuiteReport,
)
from app.services.config_loader import apply_overrides, load_config
from app.services.export import write_trajectory
from app.services.simulation import run_scenario, verify_log

logger = logging.getLogger(__name__)

INSIDE_TARGET = (2.0, 2.0, 5.0)
OUTSIDE_TARGET = (10.0, 10.0, 8.0)
CIRCLE_CENTER = (0.0, 0.0, 6.0)
CIRCLE_RADIUS = 15.0


def canonical_suite(base: ScenarioConfig | None = None) -> list[SuiteEntry]:
    """
    In-sphere setpoint, out-of-sphere setpoint and over-radius circle with the
    filter on, plus the out-of-sphere setpoint with the filter off.
    """
    base = base if base is not None else ScenarioConfig(model=ModelKind.DOUBLE_INTEGRATOR)

    def variant(name: str, **update) -> ScenarioConfig:
        return ScenarioConfig.model_validate({**base.model_dump(by_alias=True), "name": name, **update})

    return [
        SuiteEntry(
            name="inside_setpoint",
            config=variant("inside_setpoint", scenario=ScenarioKind.SETPOINT, target=INSIDE_TARGET),
        ),
        SuiteEntry(
            name="outside_setpoint",
            config=variant(
                "outside_setpoint", scenario=ScenarioKind.SETPOINT, target=OUTSIDE_TARGET
            ),
        ),
        SuiteEntry(
            name="circle_track",
            config=variant(
                "circle_track",
                scenario=ScenarioKind.CIRCULAR_TRACK,
                center=CIRCLE_CENTER,
                radius=CIRCLE_RADIUS,
            ),
        ),
        SuiteEntry(
            name="outside_setpoint_ablation",
            config=variant(
                "outside_setpoint_ablation",
                scenario=ScenarioKind.SETPOINT,
                target=OUTSIDE_TARGET,
                filter_enabled=False,
            ),
            safety_critical=False,
        ),
    ]


class SuiteService:
    """Runs every entry of a manifest and collects per-entry invariant reports."""

    def __init__(self, manifest: RunManifest):
        self.manifest = manifest

    def entries(self) -> list[SuiteEntry]:
        """
        Resolve the manifest into suite entries.

        Raises:
            ConfigError: A referenced config or an override is invalid
        """
        manifest = self.manifest
        if manifest.batch:
            entries = []
            for path in manifest.batch:
                config = load_config(path)
                if config.name == ScenarioConfig.model_fields["name"].default:
                    config = config.model_copy(update={"name": Path(path).stem})
                entries.append(
                    SuiteEntry(name=config.name, config=config, safety_critical=config.filter_enabled)
                )
        else:
            base = load_config(manifest.base_config) if manifest.base_config else None
            entries = canonical_suite(base)

        overrides = dict(manifest.overrides)
        if manifest.force_no_filter:
            overrides["filter.enabled"] = False
        return [
            entry.model_copy(update={"config": apply_overrides(entry.config, overrides)})
            for entry in entries
        ]

    def run_entry(self, entry: SuiteEntry) -> SuiteEntryResult:
        """
        One episode, its files and its report.

        Aborted episodes and unwritable outputs are recorded on the result so the
        remaining entries still run.
        """
        try:
            log = run_scenario(entry.config)
        except SimulationFault as exc:
            logger.error("Suite entry %s aborted: %s", entry.name, exc)
            return SuiteEntryResult(
                name=entry.name, safety_critical=entry.safety_critical, error=str(exc)
            )

        report = verify_log(log, entry.config)
        try:
            outputs = write_trajectory(log, self.manifest)
        except ExportError as exc:
            logger.error("Suite entry %s could not be written: %s", entry.name, exc)
            return SuiteEntryResult(
                name=entry.name,
                safety_critical=entry.safety_critical,
                report=report,
                error=str(exc),
            )
        return SuiteEntryResult(
            name=entry.name,
            safety_critical=entry.safety_critical,
            report=report,
            outputs=[str(p) for p in outputs],
        )

    def run(self) -> SuiteReport:
        entries = self.entries()
        logger.info("Running suite with %d scenarios into %s", len(entries), self.manifest.output_dir)
        suite = SuiteReport()
        for index, entry in enumerate(entries, start=1):
            logger.info("[%d/%d] %s", index, len(entries), entry.name)
            suite.entries.append(self.run_entry(entry))
        self.write_report(suite)
        return suite

    def write_report(self, suite: SuiteReport) -> Path:
        path = Path(self.manifest.output_dir) / settings.SUITE_REPORT_NAME
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(suite.model_dump_json(indent=2), encoding="utf-8")
        except OSError as exc:
            raise ExportError(str(path), exc.strerror or str(exc)) from exc
        return path


def run_suite(manifest: RunManifest) -> SuiteReport:
    """Run the manifest's suite; ``SuiteReport.safe`` decides the exit status."""
    return SuiteService(manifest).run()
