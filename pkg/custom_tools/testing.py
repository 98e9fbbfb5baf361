"""Shared test base: quiet console logger and throwaway directories."""
import tempfile
from pathlib import Path

from django.test import TestCase

from custom_tools.logger import CustomLogger, LoggerConfig, LogLevel


class LabTestCase(TestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        CustomLogger.configure(LoggerConfig(level=LogLevel.CRITICAL, color_output=False))

    def make_tempdir(self) -> Path:
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        return Path(directory.name)
