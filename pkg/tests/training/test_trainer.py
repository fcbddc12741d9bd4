import csv

import pytest
import torch

from label_diffusion.denoiser import LabelDiffusionModel
from label_diffusion.errors import NumericError, ParameterError
from label_diffusion.training import (
    collate_samples,
    LOSS_CSV_HEADER,
    PhraseSampleDataset,
    Trainer,
    new_train_state,
    train_step,
)
from tests.factories import tiny_config, tiny_train_config


def snapshot(model):
    return {name: tensor.detach().clone() for name, tensor in model.state_dict().items()}


def test_train_step_updates_parameters(tiny_model, tiny_batch):
    config = tiny_train_config()
    state = new_train_state(tiny_model, config)
    before = snapshot(tiny_model)
    train_step(state, tiny_batch, config)
    assert state.step == 1
    assert int(tiny_model.trained_steps) == 1
    assert state.last_loss is not None
    assert not torch.equal(before["unet.conv_out.weight"], tiny_model.unet.conv_out.weight)


def test_full_dropout_leaves_text_embeddings_without_gradient(tiny_model, tiny_batch):
    config = tiny_train_config(p_drop=1.0)
    state = new_train_state(tiny_model, config)
    train_step(state, tiny_batch, config)
    grad = tiny_model.phrase_encoder.word_embeddings.weight.grad
    assert grad is None or torch.all(grad == 0)
    assert tiny_model.phrase_encoder.null_global.grad is not None


def test_identical_seeds_give_identical_losses(tiny_scenes):
    histories = []
    for _ in range(2):
        torch.manual_seed(0)
        model = LabelDiffusionModel(tiny_config())
        dataset = PhraseSampleDataset.from_scenes(tiny_scenes, model.vocab)
        config = tiny_train_config(max_steps=3, epochs=2)
        trainer = Trainer(new_train_state(model, config), config, dataset)
        trainer.run()
        histories.append(trainer.history)
    assert len(histories[0]) == 3
    assert histories[0] == histories[1]


def test_non_finite_gradient_leaves_state_unchanged(tiny_model, tiny_batch):
    config = tiny_train_config()
    state = new_train_state(tiny_model, config)
    train_step(state, tiny_batch, config)
    before = snapshot(tiny_model)
    optimizer_before = state.optimizer.state_dict()["state"][0]["exp_avg"].clone()
    rng_before = state.generator.get_state()

    tiny_model.unet.conv_out.weight.register_hook(lambda grad: grad * float("nan"))
    with pytest.raises(NumericError, match="unet.conv_out.weight"):
        train_step(state, tiny_batch, config)

    assert state.step == 1
    assert int(tiny_model.trained_steps) == 1
    for name, tensor in snapshot(tiny_model).items():
        assert torch.equal(tensor, before[name]), name
    assert torch.equal(state.optimizer.state_dict()["state"][0]["exp_avg"], optimizer_before)
    assert torch.equal(state.generator.get_state(), rng_before)


def test_mismatched_schedule_length(tiny_model):
    with pytest.raises(ParameterError):
        new_train_state(tiny_model, tiny_train_config(total_steps=1000))


def test_trainer_writes_loss_csv_and_checkpoint(tmp_path, tiny_model, tiny_scenes):
    dataset = PhraseSampleDataset.from_scenes(tiny_scenes, tiny_model.vocab)
    config = tiny_train_config(max_steps=4, epochs=3, log_interval=2)
    trainer = Trainer(new_train_state(tiny_model, config), config, dataset, output_dir=tmp_path)
    trainer.run()

    with trainer.loss_csv_path.open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == LOSS_CSV_HEADER
    assert [int(row[0]) for row in rows[1:]] == [2, 4]
    assert trainer.checkpoint_path.is_file()


def test_planned_steps(tiny_model, tiny_scenes):
    dataset = PhraseSampleDataset.from_scenes(tiny_scenes, tiny_model.vocab)
    config = tiny_train_config(epochs=3, batch_size=2)
    trainer = Trainer(new_train_state(tiny_model, config), config, dataset)
    assert trainer.steps_per_epoch == (len(dataset) + 1) // 2
    assert trainer.planned_steps == 3 * trainer.steps_per_epoch


def test_train_step_overfits_four_scenes(tiny_scenes):
    torch.manual_seed(0)
    model = LabelDiffusionModel(tiny_config())
    dataset = PhraseSampleDataset.from_scenes(tiny_scenes, model.vocab)
    batch = collate_samples([dataset[i] for i in range(len(dataset))])
    config = tiny_train_config(learning_rate=1e-3, p_drop=0.0)
    state = new_train_state(model, config)

    losses = []
    for _ in range(200):
        train_step(state, batch, config)
        losses.append(state.last_loss)

    initial = sum(losses[:10]) / 10
    final = sum(losses[-10:]) / 10
    assert final < 0.8 * initial, (initial, final)


def test_output_depends_on_conditioning_after_training(tiny_model, tiny_batch):
    config = tiny_train_config()
    train_step(new_train_state(tiny_model, config), tiny_batch, config)

    tiny_model.eval()
    encoder = tiny_model.phrase_encoder
    generator = torch.Generator().manual_seed(7)
    with torch.no_grad():
        image_latent = tiny_model.encode_images(tiny_batch.images[:1])
        xt = torch.randn(tiny_batch.x0[:1].shape, generator=generator, dtype=tiny_model.dtype)
        t = torch.tensor([tiny_model.config.total_steps // 2])
        with_phrase = tiny_model.predict_noise(xt, image_latent, t, encoder.encode(["red circle"]))
        with_null = tiny_model.predict_noise(xt, image_latent, t, encoder.null(1))
    assert torch.max(torch.abs(with_phrase - with_null)).item() > 0
