from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# every abelian group of order <= 16, one per invariant-factor shape
SHAPES_16 = [
    (1,), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2), (9,), (3, 3),
    (10,), (11,), (12,), (2, 6), (13,), (14,), (15,), (16,), (2, 8), (4, 4), (2, 2, 4), (2, 2, 2, 2),
]
SHAPES_12 = [s for s in SHAPES_16 if __import__("math").prod(s) <= 12]
SHAPES_8 = [s for s in SHAPES_16 if __import__("math").prod(s) <= 8]
