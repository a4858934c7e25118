import pytest
from sklearn.base import clone

from railresched.constraints import PriorityPolicy, validate_schedule
from railresched.estimator import CentralizedRescheduler, DisasterRescheduler
from railresched.exceptions import InvalidNetwork, InvalidTimetable, NotFittedError
from railresched.rescheduler import DisasterEvent, RecoveryModel


def _ev(t=10, platforms=(("C", 1),)):
    return DisasterEvent(t, frozenset(platforms), recovery=RecoveryModel(20, 20))


def test_params_and_clone():
    est = CentralizedRescheduler(seed=4, levels=3)
    params = est.get_params()
    assert params["seed"] == 4 and params["levels"] == 3 and params["latency"] == 3
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(headway=7)
    assert est.headway == 7


def test_fit_predict_score(line_net, two_trains):
    est = DisasterRescheduler().fit((line_net, two_trains))
    assert est.n_trains_ == 2
    results = est.predict([_ev(), _ev(4)])
    assert len(results) == 2
    for ev, r in zip([_ev(), _ev(4)], results):
        assert validate_schedule(line_net, r.new_schedule, blockages=ev.blockages(r.t_R)) == []
    assert est.predict(_ev())[0].total_delay == results[0].total_delay
    assert est.score([_ev(), _ev(4)]) == -sum(r.total_delay for r in results) / 2
    assert est.score([]) == 0.0


def test_distributed_never_worse_than_centralized(line_net, two_trains):
    evs = [_ev(t) for t in (1, 4, 10, 35)]
    d = DisasterRescheduler().fit((line_net, two_trains)).score(evs)
    c = CentralizedRescheduler().fit((line_net, two_trains)).score(evs)
    assert d >= c


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DisasterRescheduler().predict([_ev()])


def test_bad_inputs(line_net, two_trains):
    with pytest.raises(TypeError):
        DisasterRescheduler().fit(line_net)
    with pytest.raises(TypeError):
        DisasterRescheduler().fit(("net", two_trains))
    with pytest.raises(TypeError):
        DisasterRescheduler().fit((line_net, "tt"))
    with pytest.raises(ValueError):
        DisasterRescheduler(headway=-1).fit((line_net, two_trains))
    with pytest.raises(ValueError):
        CentralizedRescheduler(levels=1.5).fit((line_net, two_trains))
    with pytest.raises(TypeError):
        DisasterRescheduler(policy="busy").fit((line_net, two_trains))
    est = DisasterRescheduler(policy=PriorityPolicy()).fit((line_net, two_trains))
    with pytest.raises(TypeError):
        est.predict(["not an event"])
    with pytest.raises(InvalidNetwork):
        est.predict([_ev(platforms=(("C", 5),))])


def test_strict_rejects_infeasible_timetables(line_net, two_trains):
    bad = two_trains.copy()
    bad.entries[1].x_AT = 3  # P1 reaches B before the journey time allows
    with pytest.raises(InvalidTimetable):
        DisasterRescheduler().fit((line_net, bad))
    DisasterRescheduler(strict=False).fit((line_net, bad))
