# config/observability.py
import logging
from typing import Any, Dict, Optional

import wandb

from config.settings import Settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: str = "INFO") -> None:
    """Single stream handler on the root logger"""
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, force=True)


class ObservabilityConfig:
    """Optional Weights & Biases logging of experiment metrics"""

    def __init__(self, settings: Optional[Settings] = None):
        settings = settings or Settings()
        self.wandb_api_key = settings.wandb_api_key
        self.wandb_project = settings.wandb_project

        if self.wandb_api_key:
            wandb.login(key=self.wandb_api_key)
            wandb.init(project=self.wandb_project)

    @property
    def enabled(self) -> bool:
        return bool(self.wandb_api_key) and wandb.run is not None

    def log_to_wandb(self, metrics: Dict[str, Any], step: Optional[int] = None):
        if wandb.run:
            wandb.log(metrics, step=step)
