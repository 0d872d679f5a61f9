from arthomework.service.app import create_app
from arthomework.service.auth import Principal, TokenTable
from arthomework.service.config import ApiConfig
from arthomework.service.state import ServiceState

__all__ = ["ApiConfig", "Principal", "ServiceState", "TokenTable", "create_app"]
