import csv
import json
import os

import numpy as np

OUTPUT_ENV = "HODGE_VERIFIER_OUTPUT"
DEFAULT_OUTPUT = "verification_output"


def load_config(config_file="verifier_config.json"):
    """Load configuration from a JSON file.

    Relative paths resolve against the working directory first, then the repository root.
    """
    try:
        if os.path.isabs(config_file) or os.path.isfile(config_file):
            config_path = config_file
        else:
            # Get the directory of the current script
            script_dir = os.path.dirname(os.path.abspath(__file__))
            config_path = os.path.join(script_dir, "..", config_file)  # Adjust for parent directory
        with open(config_path, "r") as file:
            return json.load(file)
    except FileNotFoundError:
        raise FileNotFoundError(f"Configuration file {config_file} not found.")
    except json.JSONDecodeError as e:
        raise ValueError(f"Error decoding JSON configuration: {e}")


def resolve_output_dir(cli_value=None, config=None):
    """--out beats the environment variable, which beats the config "output" section."""
    if cli_value:
        return cli_value
    if os.environ.get(OUTPUT_ENV):
        return os.environ[OUTPUT_ENV]
    return ((config or {}).get("output") or {}).get("directory", DEFAULT_OUTPUT)


def _plain(value):
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        # JSON has no NaN/Infinity
        return value if np.isfinite(value) else repr(value)
    return value


class ReportStore:
    def __init__(self, output_dir, logger):
        self.output_dir = output_dir
        self.logger = logger  # Use the logger passed from the main script
        self.written = []
        self.is_open = False

    def connect(self):
        """Create the output directory."""
        try:
            os.makedirs(self.output_dir, exist_ok=True)
            self.is_open = True
            self.logger.info(f"Writing reports to {self.output_dir}")
        except OSError as e:
            self.logger.error(f"Error creating output directory {self.output_dir}: {e}")
            raise

    def validate_connection(self):
        if not self.is_open:
            self.logger.warning("Report store is not open. Opening it...")
            self.connect()

    def path(self, name):
        return os.path.join(self.output_dir, name)

    def write_json(self, name, data):
        """Write `data` as sorted, indented JSON (byte-identical for identical data)."""
        self.validate_connection()
        target = self.path(name)
        os.makedirs(os.path.dirname(target), exist_ok=True)
        try:
            with open(target, "w") as file:
                json.dump(_plain(data), file, indent=2, sort_keys=True)
                file.write("\n")
        except (OSError, TypeError) as e:
            self.logger.error(f"Error writing {target}: {e}")
            raise
        self.written.append(target)
        self.logger.debug(f"Wrote {target}")
        return target

    def write_csv(self, name, rows, batch_size=1000):
        """
        Write a list of dicts as CSV, in batches.

        Args:
            name (str): File name relative to the output directory.
            rows (list of dict): Rows sharing the keys of the first row.
            batch_size (int): Number of rows written per batch.
        """
        if not rows:
            self.logger.warning(f"No rows provided for {name}.")
            return None

        self.validate_connection()
        target = self.path(name)
        os.makedirs(os.path.dirname(target), exist_ok=True)
        columns = list(rows[0].keys())
        try:
            with open(target, "w", newline="") as file:
                writer = csv.DictWriter(file, fieldnames=columns, lineterminator="\n")
                writer.writeheader()
                for i in range(0, len(rows), batch_size):
                    writer.writerows(rows[i:i + batch_size])
                    self.logger.debug(f"{name}: batch {i // batch_size + 1} with {len(rows[i:i + batch_size])} rows")
        except (OSError, ValueError) as e:
            self.logger.error(f"Error writing {target}: {e}")
            raise
        self.written.append(target)
        return target

    def close(self):
        """Close the store and log what was written."""
        if self.is_open:
            self.is_open = False
            self.logger.info(f"Report store closed ({len(self.written)} files written).")
        else:
            self.logger.warning("Attempted to close a report store that is not open.")
