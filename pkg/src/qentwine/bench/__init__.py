"""Instance catalog, verification suites, CLI and reporting."""
