import pytest

from condet.corpus_io import parse_corpus
from condet.synthetic import make_corpus

TINY_TSV = """# doc = d1
He\tPRON\tO
went\tVERB\tO
to\tADP\tO
Paris\tPROPN\tO
and\tCCONJ\tB-Conn
visited\tVERB\tO
it\tPRON\tO

He\tPRON\tO
speaks\tVERB\tO
English\tPROPN\tO
and\tCCONJ\tO
French\tPROPN\tO

# doc = d2
On\tADP\tB-Conn
the\tDET\tI-Conn
other\tADJ\tI-Conn
hand\tNOUN\tI-Conn
,\tPUNCT\tO
it\tPRON\tO
rained\tVERB\tO
.\tPUNCT\tO
"""

TINY_CONLLU = """# newdoc id = d1
# sent_id = 1
# text = He went and left.
1\tHe\the\tPRON\tPRP\t_\t2\tnsubj\t_\t_
2\twent\tgo\tVERB\tVBD\t_\t0\troot\t_\t_
3-4\tandleft\t_\t_\t_\t_\t_\t_\t_\t_
3\tand\tand\tCCONJ\tCC\t_\t4\tcc\t_\tConn=B-Conn
4\tleft\tleave\tVERB\tVBD\t_\t2\tconj\t_\tSpaceAfter=No
4.1\tleft\t_\t_\t_\t_\t_\t_\t_\t_
5\t.\t.\tPUNCT\t.\t_\t2\tpunct\t_\t_

# newdoc id = d2
1\tFor\tfor\tADP\tIN\t_\t2\tcase\t_\tConn=B-Conn
2\tinstance\tinstance\tNOUN\tNN\t_\t0\troot\t_\tConn=I-Conn|SpaceAfter=No
3\t,\t,\tPUNCT\t,\t_\t2\tpunct\t_\t_

"""


@pytest.fixture
def tiny_corpus():
    return parse_corpus(TINY_TSV, "tsv")


@pytest.fixture
def tiny_conllu():
    return parse_corpus(TINY_CONLLU, "conllu")


@pytest.fixture(scope="session")
def synthetic_split():
    return make_corpus(30, 15, seed=11), make_corpus(12, 15, seed=12, prefix="held")


# -- acceptance summary: one PASS/FAIL line per criterion ---------------------

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _criteria.get(report.nodeid)
    if marker is None:
        return
    num, title = marker
    entry = _results.setdefault(num, [title, True, []])
    if report.failed:
        entry[1] = False
        entry[2].append(report.nodeid.split("::")[-1])


_results: dict = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        title, ok, failed = _results[num]
        line = f"criterion {num:>2}  {'PASS' if ok else 'FAIL'}  {title}"
        if failed:
            line += f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(line)
