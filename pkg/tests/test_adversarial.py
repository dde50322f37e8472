import math
from types import SimpleNamespace

import numpy as np
import pytest
import torch

from app.utils.adversarial import (
    cross_entropy,
    discriminate,
    generator_adversarial_loss,
    head_adversarial_loss,
    tail_adversarial_loss,
)
from app.utils.graph import DegreePartition

LN2 = math.log(2.0)


def disc_params(d, rng=None, requires_grad=False):
    if rng is None:
        values = (np.zeros((d, d)), np.zeros(d), np.zeros(d))
    else:
        values = (rng.normal(size=(d, d)), rng.normal(size=d), rng.normal(size=d))
    W_d, b_d, w_d = (torch.tensor(v, dtype=torch.float64, requires_grad=requires_grad) for v in values)
    return SimpleNamespace(W_d=W_d, b_d=b_d, w_d=w_d)


def partition(head):
    return DegreePartition(k=1, head_mask=np.asarray(head, dtype=bool))


class TestDiscriminate:

    def test_zero_input_is_half(self):
        p = disc_params(3, np.random.default_rng(0))
        p.b_d = torch.zeros(3, dtype=torch.float64)
        out = discriminate(torch.zeros(4, 3, dtype=torch.float64), p)
        np.testing.assert_allclose(out.numpy(), 0.5)

    def test_zero_output_weights_is_half(self, rng):
        p = disc_params(3, rng)
        p.w_d = torch.zeros(3, dtype=torch.float64)
        out = discriminate(torch.from_numpy(rng.normal(size=(5, 3))), p)
        np.testing.assert_allclose(out.numpy(), 0.5)

    def test_scalar_oracle(self, rng):
        p = disc_params(4, rng)
        h = rng.normal(size=4)
        W, b, w = p.W_d.numpy(), p.b_d.numpy(), p.w_d.numpy()
        hidden = [sum(W[r, c] * h[c] for c in range(4)) + b[r] for r in range(4)]
        hidden = [v if v > 0 else 0.2 * v for v in hidden]
        z = sum(w[r] * hidden[r] for r in range(4))
        expected = 1.0 / (1.0 + math.exp(-z))
        assert discriminate(torch.from_numpy(h[None]), p).item() == pytest.approx(expected, rel=1e-12)

    def test_clamped(self):
        p = disc_params(1)
        p.W_d = torch.ones(1, 1, dtype=torch.float64)
        p.w_d = torch.full((1,), 1e4, dtype=torch.float64)
        out = discriminate(torch.ones(1, 1, dtype=torch.float64), p)
        assert out.item() == pytest.approx(1.0 - 1e-7)


class TestCrossEntropy:

    def test_decreasing_in_probability(self):
        probs = torch.linspace(0.01, 0.99, 50, dtype=torch.float64)
        values = cross_entropy(1.0, probs)
        assert torch.all(values[1:] < values[:-1])

    def test_half(self):
        assert cross_entropy(0.0, torch.tensor(0.5)).item() == pytest.approx(LN2)


class TestDiscriminatorLosses:

    def test_tail_loss_counts_every_node(self, rng):
        part = partition([True, False, True, False, False])
        h = torch.from_numpy(rng.normal(size=(5, 3)))
        loss = tail_adversarial_loss(h, h.clone(), part, disc_params(3))
        assert loss.item() == pytest.approx(5 * LN2, rel=1e-12)

    def test_all_tail_uses_real_terms_only(self, rng):
        part = partition([False] * 4)
        p = disc_params(2, rng)
        h = torch.from_numpy(rng.normal(size=(4, 2)))
        loss = tail_adversarial_loss(h, torch.zeros(4, 2, dtype=torch.float64), part, p)
        expected = -torch.log(discriminate(h, p)).sum()
        assert loss.item() == pytest.approx(expected.item(), rel=1e-12)

    def test_head_loss_example(self, rng):
        part = partition([True, True, True] + [False] * 5)
        h = torch.from_numpy(rng.normal(size=(8, 3)))
        loss = head_adversarial_loss(h, h.clone(), part, disc_params(3))
        assert loss.item() == pytest.approx(11 * LN2, rel=1e-12)

    def test_descent_smoke(self):
        rng = np.random.default_rng(5)
        increases = 0
        for _ in range(20):
            part = partition(rng.random(10) < 0.4)
            h = torch.from_numpy(rng.normal(size=(10, 4)))
            h_tilde = torch.from_numpy(rng.normal(size=(10, 4)))
            p = disc_params(4, rng, requires_grad=True)
            params = [p.W_d, p.b_d, p.w_d]
            opt = torch.optim.SGD(params, lr=1e-3)
            before = tail_adversarial_loss(h, h_tilde, part, p)
            opt.zero_grad()
            before.backward()
            opt.step()
            with torch.no_grad():
                after = tail_adversarial_loss(h, h_tilde, part, p)
            increases += int(after.item() > before.item())
        assert increases <= 1


class TestGeneratorLoss:

    def test_half_outputs(self, rng):
        part = partition([True, False, True, False, False, False])
        h = torch.from_numpy(rng.normal(size=(6, 3)))
        loss = generator_adversarial_loss(h, h.clone(), part, disc_params(3), disc_params(3))
        assert loss.item() == pytest.approx((2 + 6) * LN2, rel=1e-12)

    def test_without_head_branch(self, rng):
        part = partition([True, False, True])
        h = torch.from_numpy(rng.normal(size=(3, 2)))
        loss = generator_adversarial_loss(h, None, part, disc_params(2), disc_params(2))
        assert loss.item() == pytest.approx(2 * LN2, rel=1e-12)

    def test_fooled_discriminator(self):
        part = partition([True, True, False])
        p = disc_params(2)
        p.W_d = torch.eye(2, dtype=torch.float64)
        p.w_d = torch.full((2,), 50.0, dtype=torch.float64)
        h = torch.ones(3, 2, dtype=torch.float64)
        loss = generator_adversarial_loss(h, h, part, p, p)
        assert loss.item() < 1e-5

    def test_no_gradient_to_discriminators(self, rng):
        part = partition([True, False, True, False])
        p_tail = disc_params(3, rng, requires_grad=True)
        p_head = disc_params(3, rng, requires_grad=True)
        h_tilde = torch.from_numpy(rng.normal(size=(4, 3))).requires_grad_(True)
        h_hat = torch.from_numpy(rng.normal(size=(4, 3))).requires_grad_(True)
        generator_adversarial_loss(h_tilde, h_hat, part, p_tail, p_head).backward()
        assert h_tilde.grad is not None and h_hat.grad is not None
        for p in (p_tail, p_head):
            assert p.W_d.grad is None and p.b_d.grad is None and p.w_d.grad is None
