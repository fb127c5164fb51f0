import pathlib

from hypothesis import HealthCheck, settings

settings.register_profile(
    "leverlab",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("leverlab")

DATA_DIR = pathlib.Path(__file__).parent / "data"
