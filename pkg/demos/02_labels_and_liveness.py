# %% [markdown]
# # Labels and live labels
#
# Labeling gives every prefix and replication a unique label: a binary
# string recording its position under parallel compositions, and a counter
# of enclosing prefixes.  Labels are how fairness talks about "the same
# action" across a computation.

# %%
from fairpi import label_term, live_labels, parse_labeled, parse_process, pretty, step
from fairpi.labeling import ROOT, all_labels

e = label_term(parse_process("x(y).((nu z)(z(k) | z<h>)) | a(u)"), ROOT)
print(pretty(e))
print(sorted(map(str, all_labels(e))))

# %% [markdown]
# When a replication fires, the copy and the remaining replication get fresh
# labels derived from the old one, so no label is ever reused.

# %%
r = parse_labeled("!@1,2 a(x).b<x>")
for t in step(r, {"c"}):
    if str(t.action) == "a(c)":
        print("fired", sorted(map(str, t.fired)), "->", pretty(t.target))

# %% [markdown]
# A label is live when it can take part in some tau step right now.  Here
# the output and the observer input can synchronize, while the private
# input has no partner.

# %%
s = parse_labeled("a<b>@0,0 | a(x)@10,0.w | (nu c)(c(k)@11,0)")
print(sorted(map(str, live_labels(s))))
