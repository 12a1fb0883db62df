# %% [markdown]
# # Terms, canonical forms and the tau-graph
#
# Processes are written in a small surface syntax: `a<y>.P` outputs `y`
# on `a`, `a(x).P` inputs into `x`, `|` composes in parallel, `(nu x)`
# restricts and `!` replicates.  Observers may also use the success prefix
# `w`.

# %%
from fairpi import build_state_graph, canonicalize, parse_process, pretty, step

p = parse_process("(nu b)(b<u> | !b(x).b<u>) | a<u>")
print("term:     ", pretty(p))
print("canonical:", canonicalize(p).key)

# %% [markdown]
# Canonical forms ignore the order of parallel components, unused
# restrictions and the names of bound variables, so alpha-variants coincide.

# %%
q = parse_process("a<u> | (nu c)(!c(y).c<u> | c<u>)")
print("same canonical form:", canonicalize(p) == canonicalize(q))

# %% [markdown]
# `step` lists the early transitions of a term.  Inputs are offered for
# every free name plus one fresh name, which keeps the branching finite.

# %%
for t in step(parse_process("a(x).x<c> | a<b>")):
    print(f"{str(t.action):10} -> {pretty(t.target)}")

# %% [markdown]
# An experiment puts a process next to an observer.  Its tau-graph has one
# node per canonical state; success nodes are drawn as double circles in the
# DOT export.

# %%
g = build_state_graph(parse_process(f"{pretty(p)} | a(x).w", observer=True), 100)
print(len(g), "nodes, edges", g.tau_edges, "success", g.success)
print(g.to_dot())
