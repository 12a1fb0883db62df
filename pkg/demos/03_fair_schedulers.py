# %% [markdown]
# # Fair schedulers and lasso certificates
#
# A computation is weakly fair when no label stays live forever without
# firing, and strongly fair when no label is live infinitely often without
# firing.  Infinite computations are witnessed by lassos: a prefix, a loop,
# and a map saying which label at the loop end plays the role of which label
# at the loop start.

# %%
from fairpi import label_term, parse_process, pretty, run_scheduler, validate_certificate
from fairpi.fairness import avoiding
from fairpi.labeling import ROOT
from fairpi.syntax import Label, Par

observer = parse_process("a(x).w", observer=True)


def experiment(text):
    return label_term(Par(parse_process(text), observer), ROOT)


# %% [markdown]
# The strong queue scheduler serves the oldest live label first.  Next to
# a private loop it still lets the observer synchronize.

# %%
comp = run_scheduler(experiment("(nu b)(b<u> | !b(x).b<u>) | a<u>"), "strong")
print("success after", comp.success_index, "steps")

# %% [markdown]
# An adversary can starve the observer (label `1,0`) by never choosing it.
# A sink that swallows every `a` makes the observer enabled only on
# alternate steps: the resulting loop is weakly fair but not strongly fair.

# %%
comp = run_scheduler(experiment("!a(x) | (nu b)(b<u> | !b(x).(a<u> | b<u>))"),
                     avoiding({Label("1", 0)}), max_steps=40, lasso_mode="weak")
cert = comp.lasso
for state in comp.states:
    print("  ", pretty(state))
print("weak:  ", validate_certificate(cert, "weak").cls)
print("strong:", validate_certificate(cert, "strong").accepted)

# %% [markdown]
# When every round opens a private race whose winning branch restarts the
# round, the losing branch of each round dies, and even strong fairness can
# keep the observer waiting.

# %%
comp = run_scheduler(experiment("c<u> | !c(x).(nu b)(b<u> | b(x).c<u> | b(x).a<u>)"),
                     avoiding({Label("1", 0)}), max_steps=40)
res = validate_certificate(comp.lasso, "strong")
print(res.cls, "-", res.reason)
print(comp.lasso.dumps()[:300], "...")
