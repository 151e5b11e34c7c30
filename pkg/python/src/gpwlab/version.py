from importlib.metadata import PackageNotFoundError, version


try:
    __version__ = version("gpwlab")
except PackageNotFoundError:
    # running from a source checkout without installation
    __version__ = "0.0.0"
