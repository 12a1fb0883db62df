# %% [markdown]
# # Must, fair and fair-must testing
#
# Four properties of an experiment `P | o`, from strongest to weakest:
#
# * `must`: every maximal computation reaches success.
# * `wfmust`: every weakly fair maximal computation does.
# * `sfmust`: every strongly fair maximal computation does.
# * `fair`: success stays reachable from every reachable state.
#
# The bundled corpus has an example separating each neighbouring pair.

# %%
from fairpi import check, check_bisim_bounded, load_corpus

for entry in load_corpus():
    p, o = entry.parsed()
    caps = entry.caps_for()
    row = {prop: check(prop, p, o, caps).verdict for prop in ("must", "wfmust", "sfmust", "fair")}
    print(f"{entry.name:26}", "  ".join(f"{k}={v:8}" for k, v in row.items()))

# %% [markdown]
# `UNKNOWN` means the analysis could not settle the property within its
# caps; the corpus manifest records the true answer for those entries.
#
# Violations come with witnesses that can be checked on their own.

# %%
from fairpi import validate_certificate

entries = {e.name: e for e in load_corpus()}
p, o = entries["strongfair-gap"].parsed()
v = check("sfmust", p, o)
print(v.verdict, "-", v.reason)
print("certificate revalidates:", validate_certificate(v.certificate, "strong").accepted)

# %% [markdown]
# Fairness is not preserved by bisimilarity: the two terms below cannot be
# told apart by their transitions, yet the fair-must properties separate
# them.

# %%
e, _ = entries["impossibility-E"].parsed()
f, _ = entries["impossibility-F"].parsed()
print("bisimilar up to depth 4:", check_bisim_bounded(e, f, 4))
for name, term in (("E", e), ("F", f)):
    print(name, {prop: check(prop, term, o).verdict for prop in ("wfmust", "sfmust")})
