var adminPanel = { title: 'admin' };
var userPanel = { title: 'user' };

adminPanel.render = function adminRender() {
  return 'admin view';
};

userPanel.render = function userRender() {
  return 'user view';
};

function show(panel) {
  return panel.render();
}

function oldShow(panel) {
  return panel.title;
}

function formatLegacy(text) {
  return '<<' + text + '>>';
}

show(userPanel);
