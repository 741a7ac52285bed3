import os
import yaml

from typing import List, Dict, Any
from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

from .paths import Path  # noqa: E402


class _Log(BaseModel):
    to_file: bool = True


class _Numerics(BaseModel):
    fd_step: float = Field(alias="fd-step", gt=0)
    net_eps: float = Field(alias="net-eps", gt=0)
    junction_tol: float = Field(alias="junction-tol", gt=0)
    max_cells: int = Field(alias="max-cells", gt=0)
    lipschitz_probes: int = Field(alias="lipschitz-probes", ge=2)
    safety_factor: float = Field(alias="safety-factor", ge=1)
    richardson_h: float = Field(alias="richardson-h", gt=0)
    bisection_iters: int = Field(alias="bisection-iters", gt=0)


class _Sampling(BaseModel):
    overlap_samples: int = Field(alias="overlap-samples", gt=0)
    atlas_tol: float = Field(alias="atlas-tol", gt=0)
    fd_tol: float = Field(alias="fd-tol", gt=0)
    margin_trials: int = Field(alias="margin-trials", gt=0)


class _Report(BaseModel):
    timing: bool = True


class Config(BaseModel):
    version: str
    debug: bool
    log: _Log
    numerics: _Numerics
    sampling: _Sampling
    report: _Report
    workers: int = 1
    suites: List[str]


def load_config() -> Config:
    try:
        with open(Path.CONFIG.value, encoding="utf-8") as f:
            data: Dict[str, Any] = yaml.safe_load(f)

        if not data:
            raise ValueError("Config file is empty or invalid")

        config = Config.model_validate(data)

    except FileNotFoundError:
        raise FileNotFoundError(f"Configuration file not found at {Path.CONFIG.value}")

    except yaml.YAMLError as e:
        raise ValueError(f"Error parsing YAML configuration: {e}")

    except Exception as e:
        raise ValueError(f"Error loading configuration: {e}")

    workers = os.getenv("PATHATLAS_WORKERS")

    if workers:
        config.workers = max(1, int(workers))

    return config


conf = load_config()
