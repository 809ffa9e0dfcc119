"""Shared fixtures for all tests."""

import os

import pytest

from src.graph import BoundingBox, Relation, RelationGroup, SceneGraph, SceneObject, Schema

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture
def fixtures_dir():
    """Path to the fixture data directory."""
    return FIXTURES_DIR


@pytest.fixture
def scenes_path():
    """Ten object-relation records; s04, s06 and s07 have no relations after cleaning."""
    return os.path.join(FIXTURES_DIR, "scenes.jsonl")


@pytest.fixture
def video_path():
    """Human-object frames of two videos (v1 with 5 frames, v2 with 1)."""
    return os.path.join(FIXTURES_DIR, "video_frames.jsonl")


@pytest.fixture
def synonyms_path():
    return os.path.join(FIXTURES_DIR, "synonyms.yml")


@pytest.fixture
def zebra_graph():
    """Two zebras and the grass they stand on."""
    return SceneGraph(
        schema=Schema.OBJECT_RELATION,
        objects=(
            SceneObject(0, "zebra", BoundingBox(12, 40, 300, 400)),
            SceneObject(1, "zebra", BoundingBox(310, 60, 600, 410)),
            SceneObject(2, "grass", BoundingBox(0, 300, 640, 480)),
        ),
        relations=(
            Relation(0, "eating", 2),
            Relation(1, "on", 2),
        ),
    )


@pytest.fixture
def ho_graph():
    """A person holding a cup while looking at a laptop."""
    return SceneGraph(
        schema=Schema.HUMAN_OBJECT,
        objects=(
            SceneObject(0, "person", BoundingBox(100, 40, 300, 470)),
            SceneObject(1, "cup", BoundingBox(320, 200, 360, 250)),
            SceneObject(2, "laptop", BoundingBox(380, 260, 600, 420)),
        ),
        relations=(
            Relation(0, "looking_at", 2, RelationGroup.ATTENTION),
            Relation(0, "holding", 1, RelationGroup.CONTACTING),
            Relation(0, "in_front_of", 1, RelationGroup.SPATIAL),
            Relation(0, "in_front_of", 2, RelationGroup.SPATIAL),
        ),
    )
