"""
Measuring translational lag
===========================

A drug's lag is the inclusive span from its earliest basic-labeled article
to its earliest clinical-labeled one. Drugs with only one side of the story
get a status instead of a number, and the lag sample is checked against an
exponential law.
"""

from translag import (
    ArticleClassification,
    drug_timelines,
    lag_stats,
    status_counts,
    translated_lags,
    translation_rate,
)

# year and label per article; coordinates are irrelevant here
def cls(pmid, year, label):
    coord = None if label == "Other" else (0.0, 1.0)
    n_h = 0 if label == "Other" else 1
    return ArticleClassification(pmid=pmid, year=year, n_a=0, n_c=0, n_h=n_h,
                                 label=label, coord=coord)

classifications = [
    cls(1, 1962, "C"), cls(2, 1979, "H"),    # CORT: basic 1962, clinical 1979
    cls(3, 1994, "A"), cls(4, 1994, "ACH"),  # RAPA: both sides in 1994
    cls(5, 1970, "AC"),                      # VEHI: basic only
    cls(6, 2001, "CH"),                      # ONCO: clinical only
    cls(7, 1990, "H"), cls(8, 2003, "A"),    # RETR: clinical before basic
]
pairs = [(1, "CORT"), (2, "CORT"), (3, "RAPA"), (4, "RAPA"),
         (5, "VEHI"), (6, "ONCO"), (7, "RETR"), (8, "RETR")]

timelines = drug_timelines(pairs, classifications)
for t in timelines:
    lag = "-" if t.lag is None else t.lag
    print(f"{t.drug_id}: basic={t.t_eb} clinical={t.t_ec} lag={lag} [{t.status}]")

print()
print("status counts:", status_counts(timelines))
print(f"translation rate: {translation_rate(timelines):.3f}")

# two translated drugs -> a (tiny) lag sample for the exponential fit
fit = lag_stats(translated_lags(timelines))
print(f"lags n={fit.n} mean={fit.mean:.1f} median={fit.median:.1f} "
      f"ks_p={fit.ks_p:.3f}")
