# News-site mock: several section pages share a global banner, a news
# submenu, "Top Stories" and "Features" boxes and a footer, while each page
# has its own column of stories. The sections link to each other through
# the submenu, so they form the clique the extractor looks for.

from pathlib import Path

from sitetemplate import CorpusLoader, run

CORPUS = Path(__file__).resolve().parent.parent / "tests" / "sites" / "bbc"
KEY = "http://news.bbc.co.uk/technology"

# In[1]:

template, report = run(KEY, loader=CorpusLoader(CORPUS))
print("clique:", list(report.clique.members))
print("analyzed:", report.pages_analyzed)
print(f"{report.template_node_count}/{report.key_node_count} nodes kept, "
      f"{report.pages_loaded_total} pages loaded")

# In[2]: what survived and what did not

key = template.key_tree
kept_ids = {key.nodes[i].attrs.get("id") for i in template.kept} - {None}
all_ids = {n.attrs.get("id") for n in key.nodes.values()} - {None}
print("kept blocks:   ", sorted(kept_ids))
print("dropped blocks:", sorted(all_ids - kept_ids))

dropped_text = [
    n.text for n in key.nodes.values() if n.is_text and n.id not in template.kept
]
print("dropped text:", dropped_text[:6])
