import enum


class Variant(str, enum.Enum):
    FULL = "full"
    NO_KT = "no-kt"
    NO_AD = "no-ad"
    NO_GAN = "no-gan"
    NO_CL = "no-cl"
    LIGHTGCN = "lightgcn"
    NOISE_ONLY = "noise-only"

    def overrides(self) -> dict:
        """Interruptores de módulos que definen la variante"""
        off = {
            Variant.FULL: (),
            Variant.NO_KT: ("use_kt",),
            Variant.NO_AD: ("use_auto_drop",),
            Variant.NO_GAN: ("use_adversarial",),
            Variant.NO_CL: ("use_cl",),
            Variant.LIGHTGCN: ("use_kt", "use_auto_drop", "use_adversarial", "use_cl"),
            Variant.NOISE_ONLY: ("use_kt", "use_auto_drop", "use_adversarial"),
        }[self]
        flags = {name: True for name in ("use_kt", "use_auto_drop", "use_adversarial", "use_cl")}
        flags.update({name: False for name in off})
        return flags
