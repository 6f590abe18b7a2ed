"""CLI commands for the forbidden-subposet toolkit."""
