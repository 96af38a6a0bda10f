"""Minimal VCD reader, written separately from the writer under test.

Handles only what a two-state + real dump needs: ``$var`` declarations,
``$dumpvars`` initial values, ``#t`` timestamps and scalar/real changes.
"""


def read_vcd(text):
    tokens = text.split()
    i = 0
    timescale = None
    variables = {}          # id -> (name, kind)
    order = []
    initial = {}
    events = []
    tick = None
    in_dumpvars = False

    def value_change(tok, i):
        if tok[0] in "rR":
            return tokens[i + 1], float(tok[1:]), i + 2
        return tok[1:], int(tok[0]), i + 1

    while i < len(tokens):
        tok = tokens[i]
        if tok == "$timescale":
            j = tokens.index("$end", i)
            timescale = "".join(tokens[i + 1:j])
            i = j + 1
        elif tok == "$var":
            kind, _width, ident, name = tokens[i + 1:i + 5]
            variables[ident] = (name, kind)
            order.append(name)
            i = tokens.index("$end", i) + 1
        elif tok in ("$version", "$scope", "$upscope", "$enddefinitions", "$date",
                     "$comment"):
            i = tokens.index("$end", i) + 1
        elif tok == "$dumpvars":
            in_dumpvars = True
            i += 1
        elif tok == "$end":
            in_dumpvars = False
            i += 1
        elif tok.startswith("#"):
            tick = int(tok[1:])
            i += 1
        else:
            ident, value, i = value_change(tok, i)
            name = variables[ident][0]
            if in_dumpvars:
                initial[name] = value
            else:
                events.append((tick, name, value))
    return {"timescale": timescale, "signals": order,
            "kinds": {n: k for n, k in variables.values()},
            "initial": initial, "events": events}
