"""File formats, table extraction and the command-line driver."""
