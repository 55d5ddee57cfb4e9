"""
Placing articles in the triangle
================================

An article's MeSH terms vote for the three categories; the mix of votes
maps it to a point in a ternary triangle whose vertices are pure animal,
pure cell/molecule, and pure human research. Counting every category a
descriptor carries, not just one, keeps mixed descriptors honest.
"""

from translag import (
    ArticleRecord,
    DescriptorRef,
    MeshDescriptor,
    MeshIndex,
    classify_article,
    triangle_coords,
)

# a five-descriptor vocabulary, indexed by ui
index = MeshIndex(by_ui={
    "D01": MeshDescriptor("D01", "Mice", ("B01.050.199",)),
    "D02": MeshDescriptor("D02", "Cell Line", ("A11.251",)),
    "D03": MeshDescriptor("D03", "Humans",
                          ("B01.050.150.900.649.313.988.400.112.400.400",)),
    "D04": MeshDescriptor("D04", "Infant", ("M01.060",)),
    "D05": MeshDescriptor("D05", "Geography", ("Z01.107",)),
})


def show(title, uis):
    article = ArticleRecord(
        pmid=1, title=title,
        mesh_descriptors=[DescriptorRef(ui, index.by_ui[ui].name) for ui in uis],
    )
    cls = classify_article(article, index)
    coord = "no point" if cls.coord is None else f"({cls.coord[0]:+.3f}, {cls.coord[1]:+.3f})"
    print(f"{title:34s} counts=({cls.n_a},{cls.n_c},{cls.n_h}) "
          f"label={cls.label:5s} {coord}")


show("mouse knockout study", ["D01"])
show("crystal structure report", ["D02"])
show("phase III trial", ["D03", "D04"])
show("mouse model of a human disease", ["D01", "D03"])
show("bench-to-bedside survey", ["D01", "D02", "D03"])
show("regional health policy note", ["D05"])

# the three pure mixes are the vertices themselves
print()
for name, counts in [("A", (1, 0, 0)), ("C", (0, 1, 0)), ("H", (0, 0, 1))]:
    x, y = triangle_coords(*counts)
    print(f"vertex {name}: ({x:+.4f}, {y:+.4f})")
