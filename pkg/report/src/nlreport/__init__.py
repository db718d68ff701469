"""Figure generation from benchmark harness CSVs."""

from .figures import ResultTable, SchemaMismatch, performance_profile, scatter

__all__ = ["ResultTable", "SchemaMismatch", "performance_profile", "scatter"]
