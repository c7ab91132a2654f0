"""Local HTTP API and workspace wiring binding all modules together."""

from searchbench.service.app import create_app
from searchbench.service.config import AppConfig, load_config
from searchbench.service.workspace import Workspace

__all__ = ["AppConfig", "Workspace", "create_app", "load_config"]
