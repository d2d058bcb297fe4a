"""Common test classes."""
import shutil
import tempfile
import unittest
from pathlib import Path

RESOURCES_DIR = Path(__file__).resolve().parent.parent / "liemaps" / "resources"


class TestCaseWithResources(unittest.TestCase):
    """Test case with a temporary folder for written files."""

    path: Path

    def setUp(self) -> None:
        self.path = Path(tempfile.mkdtemp())

    def tearDown(self) -> None:
        shutil.rmtree(self.path)
