import hypothesis

hypothesis.settings.register_profile(
    "conesec", deadline=None, max_examples=25,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.load_profile("conesec")
