import json
import os
from pathlib import Path

from .errors import MalformedData

DATA_ENV = "CLSFRONT_DATA_DIR"
PACKAGE_DATA = Path(__file__).resolve().parent / "data"


def default_data_dir():
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else PACKAGE_DATA


def resolve(data_dir):
    return Path(data_dir) if data_dir is not None else default_data_dir()


def read_json(path):
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        raise MalformedData(f"{path}: missing data file") from None
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedData(f"{path}: {exc}") from None
