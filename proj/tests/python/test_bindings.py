import math

import pytest

import edgepost as ep

# Three binary variables, seven records; reference values computed independently.
RECORDS = [(0, 0, 1), (1, 1, 1), (1, 1, 0), (0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
EXPECTED = [
    [0.0, 0.23940675166809816, 0.17064147453260212],
    [0.23940675166809816, 0.0, 0.17064147453260214],
    [0.20860804650855513, 0.20860804650855516, 0.0],
]


def fixture():
    return ep.Dataset([list(r) for r in RECORDS], [2, 2, 2])


def test_fixture_matches_reference():
    post = ep.edge_posteriors(fixture(), ep.PriorSpec(2))
    assert post.log_marginal == pytest.approx(-13.242536525331467, abs=1e-9)
    for got, want in zip(post.matrix, EXPECTED):
        assert got == pytest.approx(want, abs=1e-9)


def test_engine_agrees_with_enumeration():
    data = fixture()
    for prior in (ep.PriorSpec(1, rho="flat", score="bdeu", ess=2.5), ep.PriorSpec(2)):
        fast = ep.edge_posteriors(data, prior)
        slow = ep.brute_posteriors(data, prior)
        assert fast.log_marginal == pytest.approx(slow.log_marginal, abs=1e-9)
        for a, b in zip(fast.matrix, slow.matrix):
            assert a == pytest.approx(b, abs=1e-9)


def test_two_empty_nodes_give_a_quarter():
    post = ep.edge_posteriors(ep.Dataset.empty(2), ep.PriorSpec(1, rho="flat"))
    assert post(0, 1) == pytest.approx(0.25, abs=1e-12)
    assert post(1, 0) == pytest.approx(0.25, abs=1e-12)


def test_threads_do_not_change_results():
    net = ep.generate_network(8, 2, 2, 5)
    data = ep.sample_data(net, 200, 6)
    one = ep.edge_posteriors(data, ep.PriorSpec(2))
    four = ep.edge_posteriors(data, ep.PriorSpec(2), threads=4)
    assert one.matrix == four.matrix
    assert one.log_marginal == four.log_marginal


def test_transforms_match_naive():
    logs = [math.log(v) for v in (1.0, 2.0, 3.0, 4.0)]
    assert [math.exp(x) for x in ep.naive_downward(logs)] == pytest.approx([10, 6, 7, 4])
    assert ep.downward_transform(logs, 2) == pytest.approx(ep.naive_downward(logs))
    support = logs[:3] + [-math.inf]
    assert ep.upward_transform(support, 1) == pytest.approx(ep.naive_upward(support))


def test_roc_and_noise():
    net = ep.generate_network(6, 2, 2, 11)
    truth = [[0.0] * 6 for _ in range(6)]
    for v, parents in enumerate(net.parents):
        for u in parents:
            truth[u][v] = 1.0
    perfect = ep.roc_from_scores([1.0, 0.0, 1.0], [True, False, True])
    assert perfect.auc == 1.0
    noise = ep.uniform_noise_posteriors(6, 3)
    assert 0.0 <= ep.roc(net, noise).auc <= 1.0


def test_errors_are_typed():
    with pytest.raises(ep.ParseError):
        ep.parse_dataset("a,b\n0,x\n")
    with pytest.raises(ep.IoError):
        ep.load_dataset("/nonexistent/data.csv")
    with pytest.raises(ep.CapExceeded):
        ep.edge_posteriors(ep.Dataset.empty(25), ep.PriorSpec(1))
    with pytest.raises(ep.DimensionMismatch):
        ep.roc(ep.generate_network(4, 1, 2, 1), ep.uniform_noise_posteriors(5, 1))


def test_json_round_trip():
    post = ep.edge_posteriors(fixture(), ep.PriorSpec(2))
    back = ep.EdgePosteriors.from_json(post.to_json())
    assert back.matrix == post.matrix
    assert back.log_marginal == post.log_marginal
