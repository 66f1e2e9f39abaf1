from ..exceptions import *

VALID_KEYS = ("ell", "s", "a", "outer_bc",
 "modes", "seed", "points",
  "tol", "bvp_tol", "nodes",
   "param", "from", "to", "steps",
    "t", "fd_step",
     "out", "log")

class ConfigFile:
    """A representation of a run configuration file itself, not the run it
    describes. Lines are key = value; everything after a # is a comment."""

    def __init__(self, contents):
        self.contents = contents
        self.records = []
        for number, line in enumerate(contents.split("\n"), start=1):
            text = line.split("#")[0].strip()
            if text:
                self.records.append(Record(number, text))
        names = [r.name for r in self.records]
        for name in names:
            if names.count(name) > 1:
                raise ConfigFileError("%s is given more than once" % name)


    def __repr__(self):
        return "<ConfigFile (%i records)>" % len(self.records)


    def get_records_by_name(self, name):
        return [r for r in self.records if r.name == name.lower()]



class Record:
    """A configuration record (a key = value line in the file)."""

    def __init__(self, number, text):
        self.number = number
        self.text = text

        #What is the name, and is it valid?
        if "=" not in text:
            raise ConfigFileError("Line %i (%s) is not a key = value pair" % (number, text))
        name, value = text.split("=", 1)
        self.name, self.value = name.strip().lower(), value.strip()
        if self.name not in VALID_KEYS:
            raise ConfigFileError("%s is not a valid configuration key (line %i)" % (self.name, number))
        if not self.value:
            raise ConfigFileError("%s has no value (line %i)" % (self.name, number))


    def __repr__(self):
        return "<%s record>" % self.name
