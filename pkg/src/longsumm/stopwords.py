"""Fixed English stopword list shared by the keyphrase and word-graph stages.

Kept in-package so runs are deterministic and need no downloads.
"""

STOPWORDS = frozenset("""
a about above after again against all also although am an and any are as at
back be because been before being below besides between both but by can
cannot consequently could did do does doing down during each either few for
from further furthermore had has have having he hence her here hers herself
him himself his how however i if in into is it its itself just may me might
more moreover most must my myself nevertheless no nor not now of off on once
only onto or other our ours ourselves out over own same shall she should so
some such than that the their theirs them themselves then there therefore
these they this those though through thus to too under until up upon us very
was we were what when where whether which while who whom why will with within
without would you your yours yourself yourselves
""".split())


def is_stopword(token: str) -> bool:
    return token.lower() in STOPWORDS
