"""
Diagnostics Writer

Streams diagnostics records to CSV through pandas. The header is written
when the file is opened, every record is appended and flushed immediately,
so a partial run is analyzable and an empty run yields a header-only file.
"""

import os
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from app.core.exceptions import OutputError
from app.core.logging import get_logger
from app.models.state import DIAGNOSTIC_COLUMNS, Diagnostics

logger = get_logger(__name__)


class DiagnosticsWriter:
    """
    Writer for the diagnostics CSV stream.

    Attributes:
        path: Output CSV path
        columns: Fixed header
        float_format: printf-style float format (round-trip exact by default)
        rows_written: Records appended so far

    Example:
        >>> writer = DiagnosticsWriter('outputs/diagnostics.csv')
        >>> writer.append(record)
    """

    def __init__(
        self,
        path: str,
        float_format: str = "%.17g",
        columns: Sequence[str] = DIAGNOSTIC_COLUMNS,
    ):
        """
        Create the file and write the header row.

        Raises:
            OutputError: If the file cannot be created
        """
        self.path = path
        self.columns: List[str] = list(columns)
        self.float_format = float_format
        self.rows_written = 0

        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            pd.DataFrame(columns=self.columns).to_csv(path, index=False, lineterminator="\n")
        except OSError as e:
            raise OutputError(f"Failed to create diagnostics file: {path}", details={"reason": str(e)})
        logger.info(f"Writing diagnostics to {path}")

    def append_rows(self, rows: Iterable[dict]) -> None:
        """
        Append rows keyed by the header columns.

        Raises:
            OutputError: If the rows cannot be written
        """
        frame = pd.DataFrame(list(rows), columns=self.columns)
        if frame.empty:
            return
        try:
            frame.to_csv(
                self.path,
                mode="a",
                header=False,
                index=False,
                float_format=self.float_format,
                lineterminator="\n",
            )
        except OSError as e:
            raise OutputError(f"Failed to append to diagnostics file: {self.path}", details={"reason": str(e)})
        self.rows_written += len(frame)

    def append(self, record: Diagnostics) -> None:
        """Append one diagnostics record."""
        self.append_rows([record.to_row()])

    def read(self) -> Optional[pd.DataFrame]:
        """Read the stream back, or None if the file is gone."""
        if not os.path.exists(self.path):
            return None
        return pd.read_csv(self.path, float_precision="round_trip")
