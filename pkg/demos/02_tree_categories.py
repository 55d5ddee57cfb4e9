"""
From tree numbers to term categories
====================================

Every MeSH descriptor sits at one or more positions in a hierarchy of
dot-delimited tree numbers. A handful of subtree rules sort those positions
into three buckets: A (animal), C (cell or molecule), H (human).
"""

from translag import DEFAULT_RULES, CategoryRuleSet, tree_number_categories

codes = [
    "A11.251.210",      # a cell line: C
    "B01.050.150",      # vertebrates: A
    "B01.050.150.900.649.313.988.400.112.400.400",  # the human lineage: H, not A
    "B01.050.150.900.649.313.988.400.112.400.400.500",  # anything below it: still H
    "M01.060",          # person by age group: H
    "G02.111.570",      # molecular structure subtree root: C
    "G02.111.575",      # its alphabetical neighbor: no bucket
    "Z01.433",          # geography: no bucket
]

for code in codes:
    cats = tree_number_categories(code)
    print(f"{code:55s} -> {set(cats) if cats else '{}'}")

# ancestry works on whole dot segments, and malformed codes fail loudly
# instead of silently matching as string prefixes
try:
    tree_number_categories("G02.111.5700")
except ValueError as exc:
    print(f"{'G02.111.5700':55s} -> {type(exc).__name__}: {exc}")

# The rules are data, not code. Swapping the animal root changes the bucket:
custom = CategoryRuleSet(a_prefixes=("Z01",), a_exceptions=())
print()
print("with Z01 as the animal subtree:",
      set(tree_number_categories("Z01.433", custom)))
default_cats = tree_number_categories("Z01.433", DEFAULT_RULES)
print("defaults untouched:", set(default_cats) if default_cats else "{}")
