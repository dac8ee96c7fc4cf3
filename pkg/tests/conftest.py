from hypothesis import settings

settings.register_profile("atlas", deadline=None, max_examples=25)
settings.load_profile("atlas")
