from esfpy.societies.profile import (
    Profile,
    ProfileFormatError,
    Society,
    count_profiles,
    enumerate_profiles,
    equivalent,
    format_profile,
    join,
    parse_profile,
    profile_at,
    restrict,
    societies_up_to,
    subsocieties,
    two_partitions,
)

__all__ = [
    "Profile",
    "ProfileFormatError",
    "Society",
    "count_profiles",
    "enumerate_profiles",
    "equivalent",
    "format_profile",
    "join",
    "parse_profile",
    "profile_at",
    "restrict",
    "societies_up_to",
    "subsocieties",
    "two_partitions",
]
