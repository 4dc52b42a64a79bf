# -*- coding: utf-8 -*-
"""Impact force profile modules"""
from lamb_toa.common import InvalidParameter


def enumerate_profiles():
    """name -> profile module, for every `profile_` member of this package"""
    return {
        name[len("profile_") :]: module
        for name, module in globals().items()
        if name.startswith("profile_")
    }


def get_profile(name: str):
    profiles = enumerate_profiles()
    if name not in profiles:
        raise InvalidParameter("profile", name, "(可选：%s)" % ", ".join(profiles))
    return profiles[name]


from lamb_toa.signal.profiles import idealized as profile_idealized
from lamb_toa.signal.profiles import experiment_based as profile_experiment_based
from lamb_toa.signal.profiles import tone_burst as profile_tone_burst
