# Coreset construction over bicriteria rings and its exhaustive check
from robustkz.coreset.builder import (
    Coreset,
    CoresetParams,
    ErrorSplit,
    build_coreset,
    coreset_error_report,
    coreset_instance,
)
from robustkz.coreset.document import coreset_to_dict
from robustkz.coreset.verify import check_coreset_guarantee

__all__ = [
    "Coreset",
    "CoresetParams",
    "ErrorSplit",
    "build_coreset",
    "check_coreset_guarantee",
    "coreset_error_report",
    "coreset_instance",
    "coreset_to_dict",
]
