from .scenario import (
    SCHEMA_VERSION,
    ConfigError,
    ConfigSyntaxError,
    DiagnosticsConfig,
    ScenarioConfig,
    load_defaults,
    merge_sections,
    config_from_dict,
    parse_config,
    load_config,
    serialize_config,
)
from .serializer import (
    METRICS_SCHEMA_VERSION,
    save_field,
    load_field,
    save_metrics,
    load_metrics,
    save_timing,
    timing_path,
    save_diagnostics_rows,
)
