from arthomework.customization.store import (
    DEFAULT_TEXT_LIMIT_BYTES,
    PROFILE_NAMESPACE,
    CustomizationProfile,
    ProfileStore,
)

__all__ = [
    "DEFAULT_TEXT_LIMIT_BYTES",
    "PROFILE_NAMESPACE",
    "CustomizationProfile",
    "ProfileStore",
]
