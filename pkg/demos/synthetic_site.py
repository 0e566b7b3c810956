# A walk through the whole pipeline on a generated site.
#
# The generator plants a main menu (every menu page links to every other),
# a sub-section cluster and a few leaf articles, and remembers which DOM
# nodes came from the shared skeleton. We extract the template starting
# from the home page and compare with what the generator knows.

import tempfile
from pathlib import Path

from sitetemplate import CorpusLoader, EqualityConfig, run
from sitetemplate.synth import SiteSpec, generate

# In[1]: write the site to disk, as `sitetemplate gen-corpus` would

out = Path(tempfile.mkdtemp()) / "site"
spec = SiteSpec(page_count=10, menu_size=5, seed=42, section_size=3, host="demo.test")
site = generate(spec, out)
print("key page:", site.key_url)
print("pages:   ", len(site.pages))
for clique in site.truth["planted_cliques"]:
    print("planted clique:", clique)

# In[2]: discover a 4-page clique and fold the mappings

loader = CorpusLoader(out)
template, report = run(site.key_url, EqualityConfig(), n=4, loader=loader)

print("clique found:", list(report.clique.members), "complete:", report.clique.complete)
print("pages loaded:", report.pages_loaded_total)
print(f"template keeps {report.template_node_count} of {report.key_node_count} nodes")

# In[3]: compare with ground truth

truth = set(site.truth["template_ids"][site.key_url])
print("matches ground truth:", set(template.kept) == truth)

# In[4]: the serialized template is ordinary HTML

print(template.to_html().decode()[:600], "...")
