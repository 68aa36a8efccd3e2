from popuc.cli.app import app

__all__ = ["app"]
