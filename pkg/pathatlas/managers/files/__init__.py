from . import json, yaml
