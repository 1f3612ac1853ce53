"""Annotation class registry.

Defects are geometrical imperfections of the surface itself; impurities
are extraneous substances sitting on it. Detection metrics aggregate over
defect classes and report impurity classes separately.
"""

BACKGROUND = 0
WATER_STAIN = 1
SCRATCH = 2
BUMP = 3
DENT = 4
FINGERPRINT = 5
STICKER = 6

CLASS_NAMES = {
    BACKGROUND: "background",
    WATER_STAIN: "water_stain",
    SCRATCH: "scratch",
    BUMP: "bump",
    DENT: "dent",
    FINGERPRINT: "fingerprint",
    STICKER: "sticker",
}

NAME_TO_ID = {name: cid for cid, name in CLASS_NAMES.items()}

DEFECT_CLASSES = (SCRATCH, BUMP, DENT)
IMPURITY_CLASSES = (WATER_STAIN, FINGERPRINT, STICKER)

# palette for class-mask PNGs (class id = pixel value = palette index)
PALETTE = {
    BACKGROUND: (0, 0, 0),
    WATER_STAIN: (60, 120, 255),
    SCRATCH: (255, 60, 60),
    BUMP: (60, 220, 60),
    DENT: (255, 200, 40),
    FINGERPRINT: (200, 80, 220),
    STICKER: (80, 220, 220),
}
