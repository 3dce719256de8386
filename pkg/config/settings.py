# config/settings.py
import os


class Settings:
    """Process settings read from the environment (after load_dotenv)"""

    def __init__(self):
        self.log_level = os.getenv("XREGO_LOG_LEVEL", "INFO")
        self.jobs = int(os.getenv("XREGO_JOBS", "1"))
        self.wandb_api_key = os.getenv("WANDB_API_KEY")
        self.wandb_project = os.getenv("WANDB_PROJECT", "xrego-experiments")
