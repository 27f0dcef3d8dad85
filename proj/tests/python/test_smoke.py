import math

import pytest

import featmc

COIN = """
module coin
  x : [0..1] init 0;
  [flip] x=0 -> 1/2:(x'=1) + 1/2:true;
  [stay] x=1 -> true;
endmodule
rewards "flips"
  [flip] true : 1;
endrewards
label "heads" = x=1;
"""


def test_coin_values():
    m = featmc.Model(COIN)
    assert m.num_states == 2
    assert m.check('Pmin=? [F "heads"]') == pytest.approx(1.0)
    assert m.check('R{"flips"}min=? [F "heads"]') == pytest.approx(2.0, abs=1e-5)
    series = m.experiment('Pmax=? [F<=k "heads"]', "k", 0, 3)
    assert [k for k, _ in series] == [0, 1, 2, 3]
    assert series[3][1] == pytest.approx(7 / 8)


def test_auv_configurations():
    m = featmc.auv_model("north_sea")
    assert len(m.configurations()) == 4
    assert m.initial_configuration == "{low,search}"
    assert m.check("Pmin=? [F s=done]") == 1.0
    assert {"safe", "unsafe"} <= set(m.labels)


def test_simulation_is_reproducible():
    m = featmc.Model(COIN)
    a = m.simulate('"heads"', reward="flips", policy="first", trials=2000, seed=11)
    b = m.simulate('"heads"', reward="flips", policy="first", trials=2000, seed=11)
    assert a == b
    assert abs(a["estimate"] - 2.0) <= 4 * a["standard_error"]


def test_errors():
    with pytest.raises(featmc.ModelError):
        featmc.Model("module m x : [0..1] init 0; endmodule junk")
    with pytest.raises(ValueError):
        featmc.scenario_overrides("atlantis")
    assert featmc.scenario_overrides("caribbean")["inspect"] == "30"
    assert not math.isnan(featmc.Model(COIN).check('Pmax=? [G !"heads"]'))
