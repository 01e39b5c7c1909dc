"""
Loads YAML (or JSON) configuration files.
"""

import pathlib

import yaml


def open_config(file_path: pathlib.Path) -> "tuple[True, dict] | tuple[False, None]":
    """
    Open and decode a configuration file.

    Parameters:
        file_path: Path to a YAML file. JSON files are accepted as well.

    Returns:
        A tuple containing success status and the decoded mapping (or None on failure).
    """
    try:
        with pathlib.Path(file_path).open("r", encoding="utf-8") as file:
            try:
                config = yaml.safe_load(file)
            except yaml.YAMLError as exc:
                print(f"ERROR: Could not parse YAML file {file_path}: {exc}")
                return False, None
    except OSError as exc:
        print(f"ERROR: Could not open file {file_path}: {exc}")
        return False, None

    if not isinstance(config, dict):
        print(f"ERROR: Configuration file {file_path} does not contain a mapping")
        return False, None

    return True, config
